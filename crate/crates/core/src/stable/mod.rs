//! Irreducible stable abelian differentials with polar nodes, in a ribbon
//! model: a finite-area core of polygons with half-infinite cylinders
//! attached along boundary segments.

mod classify;
pub mod fixtures;
mod model;
mod witness;

pub use classify::{
    classify_veech_group, classify_veech_group_with, cylinder_decomposition, residue_parallelism, ClassifyOptions,
    Complement, CylinderDecomposition, CylinderFamily, CylinderInfo, Parallelism, VeechClassification,
};
pub use model::{
    CorePiece, CylinderSpec, EdgeLink, EdgeSpec, HalfCylinder, Node, NodeSpec, Occurrence, OccurrenceSpec, PieceSpec,
    PointRef, PointSpec, Segment, SegmentSpec, SingularPoint, StableSurface, StableSurfaceSpec,
};
pub use witness::{n_witness, NElement, NWitness};
