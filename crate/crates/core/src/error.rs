//! Error type shared by all toolkit modules.

use alloc::string::String;
use core::fmt;

/// Failure modes of the numerical toolkit.
///
/// `DivergentSeries` means the periodization does not satisfy the finiteness
/// hypothesis for the requested derivative order; `Convergence` means an
/// iteration cap was reached before the requested tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed parameters, files, or requests.
    InvalidInput(String),
    /// The lattice sum provably diverges for the requested weight.
    DivergentSeries(String),
    /// A tolerance could not be met within the iteration cap.
    Convergence(String),
    /// The Gram function G0 dips below the Riesz-basis threshold.
    DegenerateGenerator(String),
    /// The operation is not defined for this generator shape.
    UnsupportedGenerator(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DivergentSeries(msg) => write!(f, "divergent series: {msg}"),
            Error::Convergence(msg) => write!(f, "non-convergence: {msg}"),
            Error::DegenerateGenerator(msg) => write!(f, "degenerate generator: {msg}"),
            Error::UnsupportedGenerator(msg) => write!(f, "unsupported generator: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
