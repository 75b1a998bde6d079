use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate ({re}, {im})")]
    NonFinitePoint { re: f64, im: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("query point ({re}, {im}) is not inside the domain")]
    QueryOutsideDomain { re: f64, im: f64 },

    #[error("basepoint is not inside the domain")]
    BasepointOutsideDomain,

    #[error("affine map has zero scale")]
    ZeroScale,

    #[error("domain has an empty boundary")]
    DegenerateDomain,

    #[error("no closed form available for {0}")]
    UnsupportedShape(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("profile has a zero harmonic-measure entry at r = {r}")]
    ZeroMeasure { r: f64 },

    #[error("need at least {needed} profile entries, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("quadrature did not reach tolerance: value {value:e}, error estimate {error:e}")]
    QuadratureFailure { value: f64, error: f64 },

    #[error("catalog function vanishes in the disk, exponent p = {p} < 2 is not admissible")]
    ZeroOnDisk { p: f64 },

    #[error("no closed-form image domain for {0}")]
    UnsupportedImage(&'static str),

    #[error("exponent p = {p} is not below the decay exponent {exponent}; both sides diverge")]
    DivergentCase { p: f64, exponent: f64 },

    #[error("domain-spec JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
