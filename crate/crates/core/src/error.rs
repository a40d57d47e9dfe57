use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point Z = q^{exponent}")]
    PoleAtEvaluation { exponent: i64 },
    #[error("negative exponent {0} in T-polynomial (bad cell)")]
    NegativeExponent(i64),
    #[error("not invertible over O")]
    NotInvertible,
    #[error("insufficient precision")]
    InsufficientPrecision,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate zeta: discriminant is not invertible")]
    DegenerateZeta,
    #[error("invariant polynomial blocks disagree")]
    BlockMismatch,
    #[error("stereographic undefined: M is singular")]
    StereographicUndefined,
    #[error("I - y is not invertible")]
    InverseStereographicUndefined,
    #[error("operator is not semilinear with respect to the base point")]
    NotSemilinear,
    #[error("dominance fails; use the full resultant")]
    DominanceFails,
    #[error("condition (*) violated for h = {h}, v = {v}")]
    ConditionStar { h: u32, v: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unexpected commutant rank: expected {expected}, found {found}")]
    CommutantRank { expected: usize, found: usize },
    #[error("window overflow: an orbit meets the window boundary (W = {window})")]
    WindowOverflow { window: usize },
    #[error("routes disagree: {0}")]
    RouteMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
