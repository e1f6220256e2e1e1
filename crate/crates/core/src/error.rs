use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("composite spectrum too large: {levels} levels exceeds the limit of {limit}")]
    Capacity { levels: usize, limit: usize },

    #[error("constraint violated at alpha = {alpha}: A - eps^alpha = {value}")]
    ConstraintViolation { alpha: f64, value: f64 },

    #[error("every sampled W_alpha is infinite; the instance imposes no finite constraint")]
    NoConstraint,

    #[error("degenerate engine: {0}")]
    DegenerateEngine(String),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("infimum dichotomy violated: interior minimum {interior} at alpha = {alpha} below both endpoints ({at_kappa}, {at_infinity})")]
    DichotomyViolation {
        alpha: f64,
        interior: f64,
        at_kappa: f64,
        at_infinity: f64,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("not applicable: {0}")]
    Inapplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
