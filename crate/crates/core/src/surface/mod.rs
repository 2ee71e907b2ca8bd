//! Translation surfaces from polygons: doubling, holonomy, the
//! Katok-Zemljakov construction and saddle connections.

mod doubling;
mod kz;
mod saddle;

pub(crate) use doubling::is_identity_within;
pub use doubling::{
    double_polygon, edge_line_angles, holonomy_around_vertex, holonomy_product, holonomy_representation, DoubledPolygon,
    HolonomyRep,
};
pub use kz::{katok_zemljakov, ConeKind, ConePoint, CopyPlacement, Gluing, KzMode, TranslationSurface};
pub use saddle::{
    project_to_billiard, saddle_connections, saddle_connections_with_options, Projection, SaddleCensus,
    SaddleConnection, SurfacePath,
};
