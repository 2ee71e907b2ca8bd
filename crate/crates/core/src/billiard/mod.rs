//! Billiards in polygons: unfolding, generalized diagonals, trajectories.

mod diagonals;
mod trajectory;
mod unfold;

pub use diagonals::{
    enumerate_generalized_diagonals, enumerate_with_options, shortest_generalized_diagonal, BilliardNet,
    DiagonalCensus, GeneralizedDiagonal, ReflectionItinerary,
};
pub use trajectory::{billiard_trajectory, Termination, Trajectory};
pub use unfold::{reflect_across_edge, UnfoldingNode};
