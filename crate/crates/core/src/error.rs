use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of an operation.
    Domain { what: &'static str, value: f64 },
    /// Inconsistent or out-of-range construction parameters.
    InvalidParameter(&'static str),
    /// A characteristic was queried past its turning point.
    Characteristic { eta_src: f64, eta_plus: f64 },
    /// Array lengths that have to agree do not.
    LengthMismatch { expected: usize, found: usize },
    /// Diffusive boundary data failing the zero-flux condition.
    Compatibility { defect: f64 },
    /// An iterative solve stopped before reaching its tolerance.
    NoConvergence { iterations: usize, residual: f64, history: alloc::vec::Vec<f64> },
    /// A NaN or infinity appeared in a solution.
    NonFinite(&'static str),
    /// A singular matrix in a direct solve.
    Singular { pivot: usize },
    /// A request outside what the solvers support.
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Characteristic { eta_src, eta_plus } => write!(
                f,
                "characteristic does not reach eta = {eta_src} (turning point at {eta_plus})"
            ),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Compatibility { defect } => {
                write!(f, "boundary data fail the compatibility condition (defect {defect:e})")
            }
            Error::NoConvergence { iterations, residual, .. } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:e})"
            ),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::Singular { pivot } => write!(f, "singular matrix at pivot {pivot}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
