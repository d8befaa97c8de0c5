use alloc::string::String;
use core::fmt;

/// Failures raised by the kernels in this crate.
///
/// Outcomes that are legitimate answers (a capped enumeration, an exceeded
/// coset budget, an `Unknown` verdict) are not errors and are reported through
/// the corresponding result types instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { left: usize, right: usize },
    UnsupportedDimension(usize),
    NotUnimodular,
    InvalidModulus(u64),
    NotPrime(u64),
    BadGeneratorIndex { index: usize, count: usize },
    EmptyGeneratorSet,
    NotInImage,
    CapExceeded { cap: usize },
    IncompleteImage,
    GraphTooLarge { vertices: usize, limit: usize },
    Disconnected,
    NoConvergence { iterations: usize, residual: f64 },
    NotAReflection(String),
    NotACircle,
    NoRationalChart,
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::UnsupportedDimension(n) => {
                write!(f, "dimension {n} outside the supported range 2..=8")
            }
            Error::NotUnimodular => f.write_str("matrix is not invertible over the integers"),
            Error::InvalidModulus(m) => write!(f, "modulus {m} must be at least 2"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::BadGeneratorIndex { index, count } => {
                write!(f, "generator index {index} out of range for {count} generators")
            }
            Error::EmptyGeneratorSet => f.write_str("generator set is empty"),
            Error::NotInImage => f.write_str("target is not in the image"),
            Error::CapExceeded { cap } => write!(f, "element budget of {cap} exceeded"),
            Error::IncompleteImage => f.write_str("image enumeration did not complete"),
            Error::GraphTooLarge { vertices, limit } => write!(
                f,
                "{vertices} vertices exceeds the dense threshold of {limit}; use the iterative solver"
            ),
            Error::Disconnected => f.write_str("graph is disconnected"),
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "eigensolver did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::NotAReflection(why) => write!(f, "not a reflection: {why}"),
            Error::NotACircle => f.write_str("vector has non-positive norm and is not a circle"),
            Error::NoRationalChart => {
                f.write_str("no rational isotropic vector found for the invariant form")
            }
            Error::InvalidInput(why) => f.write_str(why),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
