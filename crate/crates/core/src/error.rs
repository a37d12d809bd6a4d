use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("cannot mix exact and floating coefficients")]
    MixedPrecision,
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,
    #[error("composition requires an inner series with zero constant term")]
    NonzeroConstantTerm,
    #[error("unknown standard series `{0}`")]
    UnknownSeries(String),
    #[error("series of order {have} cannot be evaluated to degree {need}")]
    OrderTooLow { have: usize, need: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("invalid factor index {0}")]
    InvalidFactor(usize),
    #[error("product of two odd classes is not modelled")]
    OddTimesOdd,
    #[error("root must be a homogeneous class of degree 1")]
    NotALineClass,
    #[error("sheaf is not regular")]
    NotRegular,
    #[error("zero sheaf has no regularity threshold")]
    ZeroSheaf,
    #[error("resolution rank r_{index} solved negative ({value})")]
    NegativeRank { index: usize, value: String },
    #[error("quadrature did not converge: |{coarse} - {fine}| exceeds {tol}")]
    NonConvergence { coarse: f64, fine: f64, tol: f64 },
    #[error("unreduced symbol after rewriting: {0}")]
    Unreduced(String),
}
