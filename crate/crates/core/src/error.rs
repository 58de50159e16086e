use thiserror::Error;

use crate::series::ScalarKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-invertible series: constant term has no inverse")]
    NonInvertible,

    #[error("series must have zero constant term for {0}")]
    NonZeroConstant(&'static str),

    #[error("series must have constant term 1 for {0}")]
    ConstantNotOne(&'static str),

    #[error("series is not normalized (need f(0)=0 and f'(0)=1)")]
    NotNormalized,

    #[error("series order {got} is too small (need at least {need})")]
    OrderTooSmall { need: usize, got: usize },

    #[error("empty coefficient list")]
    Empty,

    #[error("mixed scalar kinds: {left:?} and {right:?} (promote explicitly)")]
    MixedScalarKinds { left: ScalarKind, right: ScalarKind },

    #[error("exact value required, got floating-point {0}")]
    InexactValue(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("bound formula degenerate for this generator: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("tuple is not admissible (smallest Toeplitz eigenvalue {min_eigenvalue:.3e})")]
    NotAdmissible { min_eigenvalue: f64 },

    #[error("search produced no feasible system")]
    NoFeasiblePoint,
}
