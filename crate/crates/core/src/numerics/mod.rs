//! Scalars, matrices and integer-relation detection.

pub mod angle;
pub mod ball;
pub mod exact;
pub mod lattice;
pub mod real;
pub mod relation;
pub mod syntax;

pub use angle::{rotation_matrix, AngleValue, Basis, LinComb};
pub use ball::Ball;
pub use exact::{rat, rat_int, Exact, Rational};
pub use real::{Mat2, Real};
pub use relation::{
    find_integer_relation, subgroup_of_circle_rank, Certificate, CircleRank, IntegerRelation, RelationOutcome,
    DEFAULT_MAX_COEFF, DEFAULT_PRECISION_BITS,
};
