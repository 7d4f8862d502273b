use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("subset is not stable under specialization: {0}")]
    NotSpStable(String),
    #[error("levels are not decreasing at degree {0}")]
    NotDecreasing(i64),
    #[error("filtrations live on different spectra")]
    SpectrumMismatch,
    #[error("filtration is not finite: {0}")]
    NonFinite(String),
    #[error("invalid codimension function: d({q}) != d({p}) + 1")]
    InvalidCodim { p: String, q: String },
    #[error("unsupported pair: {0}")]
    Unsupported(String),
    #[error("object carries an unresolved extension certificate in degree {0}")]
    UnresolvedCertificate(i64),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("census too large: {count} candidates exceed the cap {cap}")]
    WindowTooLarge { count: u128, cap: u128 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("object is not finitely generated: {0}")]
    NotFinitelyGenerated(String),
    #[error("engine inconsistency: {0}")]
    Inconsistent(String),
    #[error("oracle did not stabilize up to exponent {0}")]
    NotStabilized(u32),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
