use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{0}: result overflows f64")]
    Overflow(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integrand returned a non-finite value at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error_estimate:e} after {evaluations} evaluations"
    )]
    NonConvergence { value: f64, error_estimate: f64, evaluations: usize },

    #[error("kernel is singular at coincident points")]
    Singular,

    #[error("kernel point has the wrong arity for {0}")]
    Arity(&'static str),

    #[error("degenerate sampler: proposal density {density:e} at a drawn point")]
    DegenerateSampler { density: f64 },

    #[error("insufficient samples: standard error {stderr:e} exceeds bound {bound:e}")]
    InsufficientSamples { stderr: f64, bound: f64 },

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("sample window too narrow: condition number {condition:e}")]
    WindowTooNarrow { condition: f64 },

    #[error("ambiguous leading exponent: log-log slope {slope:.4} is not within 0.1 of any candidate")]
    AmbiguousExponent { slope: f64 },

    #[error("derivative of order {order} violates the r^{expected_exponent} bound (band ratio {ratio:.3})")]
    DerivativeBound { order: usize, expected_exponent: f64, ratio: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { func, detail: detail.into() }
}
