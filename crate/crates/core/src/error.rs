use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("degenerate vertex at index {0}")]
    DegenerateVertex(usize),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("spacing violated: x[{index}+1] - x[{index}] = {gap} is not > 1")]
    SpacingViolated { index: usize, gap: String },
    #[error("resonance-free search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("no generalized diagonal up to length {bound}")]
    NoDiagonalFound { bound: String },
    #[error("node budget of {budget} exhausted (partial result)")]
    BudgetExceeded { budget: u64 },
    #[error("exact unfolding requested for a polygon with an irrational angle")]
    ExactModeOnIrrational,
    #[error("angle data inconsistent with vertex coordinates: {0}")]
    InconsistentAngles(String),
    #[error("surface is truncated: {0}")]
    TruncatedSurface(String),
    #[error("saddle connection passes through a cone point in its interior")]
    ConePointInInterior,
    #[error("all angles are rational")]
    RationalAngle,
    #[error("surface has no polar nodes")]
    NoPolarNodes,
    #[error("stable surface is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("invalid stable surface: {0}")]
    InvalidStableSurface(String),
    #[error("map is not in N: {0}")]
    NotInN(String),
    #[error("surface is not of the EqualsN kind: {0}")]
    NotEqualsNSurface(String),
    #[error("classification inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
