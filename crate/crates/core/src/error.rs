use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the map it was passed to.
    Domain { what: &'static str, value: f64 },
    /// Vector length did not match the coupling geometry.
    Shape { expected: usize, found: usize },
    /// Iteration cap hit before the sup-norm step dropped below tolerance.
    /// `last` holds the final iterate (length 1 for the uncoupled recursion).
    NonConvergence {
        iterations: usize,
        last_step: f64,
        last: Vec<f64>,
    },
    /// A documented precondition of the operation does not hold.
    Precondition(&'static str),
    /// The operation needs a property the system does not declare.
    Unsupported(&'static str),
    /// A numerical routine stopped short of its tolerance.
    Numeric { what: &'static str, partial: f64 },
    /// A bracketing method was handed an interval without a sign change.
    InvalidBracket { lo: f64, hi: f64 },
    /// A system or distribution failed its construction checks.
    Construction(String),
    /// A threshold is not defined for this system.
    Undefined(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what}: value {value} is outside the domain"),
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected length {expected}, found {found}")
            }
            Error::NonConvergence {
                iterations,
                last_step,
                ..
            } => write!(
                f,
                "no convergence after {iterations} iterations (last sup-norm step {last_step:e})"
            ),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported operation: {msg}"),
            Error::Numeric { what, partial } => {
                write!(f, "{what} did not reach tolerance (partial value {partial})")
            }
            Error::InvalidBracket { lo, hi } => {
                write!(f, "interval [{lo}, {hi}] does not bracket a root")
            }
            Error::Construction(msg) => write!(f, "invalid system: {msg}"),
            Error::Undefined(msg) => write!(f, "undefined threshold: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
