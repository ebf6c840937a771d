use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the numerical routines.
///
/// Dynamical outcomes such as `Escaped` or `Undecided` are errors here only
/// because the caller asked for a value; classification code turns them back
/// into statuses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite value while evaluating at {0}")]
    NonFinite(Complex64),
    #[error("no inverse branch at {0}: point lies on the slit [0, +inf)")]
    BranchError(Complex64),
    #[error("no convergence after {iterations} iterations ({what})")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("degenerate germ: |a2| = {0:e} (parabolic point with more than one petal)")]
    DegenerateGerm(f64),
    #[error("ill-conditioned coefficient extraction (error estimate {0:e})")]
    IllConditioned(f64),
    #[error("f(z) = z on the integration contour")]
    ContourThroughZero,
    #[error("no validated petal after {0} halvings")]
    NoPetal(usize),
    #[error("orbit left the petal")]
    PetalEscape,
    #[error("orbit escaped after {0} iterations")]
    Escaped(usize),
    #[error("orbit undecided after {0} iterations")]
    Undecided(usize),
    #[error("point outside the domain of definition")]
    NotInDomain,
    #[error("point is not in the parabolic basin")]
    NotInBasin,
    #[error("horn map undefined at height {0}")]
    HeightTooLow(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
