//! Flat surfaces from polygonal billiards: exact unfolding, generalized
//! diagonals and saddle connections, holonomy rotation groups, resonance
//! checks for unbounded polygons, and Veech groups of stable differentials.

pub mod billiard;
pub mod corridor;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod numerics;
pub mod polygon;
pub mod stable;
pub mod surface;
pub mod veech;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
