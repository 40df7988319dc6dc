use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: best estimate {estimate}, error estimate {error:e}")]
    NoConvergence { estimate: Complex64, error: f64 },

    #[error("integrand is not finite at {location}")]
    SingularSample { location: Complex64 },

    #[error("leading coefficient of the cubic vanishes")]
    DegenerateDegree,

    #[error("derivative extrapolation did not settle (best error estimate {error:e})")]
    UnstableDifferentiation { error: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {0} lies on the branch cut [1, inf)")]
    OnBranchCut(Complex64),

    #[error("{what} at {z} is outside the admissible domain")]
    OutsideDomain { what: &'static str, z: Complex64 },

    #[error("factor exp(u - 2k*gamma*i) - 1 vanishes for k = {k}")]
    SingularRatio { k: u32 },

    #[error("argument {0} hits a singularity")]
    SingularArgument(Complex64),

    #[error("quantum factorial prefactor vanishes")]
    SingularPrefactor,

    #[error("two roots of the saddle cubic are equally close to the reference root")]
    AmbiguousRoot,

    #[error("u = {0} is outside the range where this quantity is defined")]
    OutsideRange(f64),

    #[error("T(u) degenerates at the upper end of the u range")]
    DegenerateT,

    #[error("pole domain is undefined for u = 0")]
    UndefinedDomain,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("multiprecision evaluation failed: {0}")]
    Precision(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
