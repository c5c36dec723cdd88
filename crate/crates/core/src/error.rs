use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} is outside the half-line (indices below -1 are undefined)")]
    IndexOutOfRange { index: i64 },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("{operation} does not support {kind} descriptors")]
    Unsupported {
        kind: &'static str,
        operation: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficient at index {index} has modulus {modulus}, outside the allowed range")]
    ModulusOutOfRange { index: i64, modulus: f64 },

    #[error("boundary evaluation needs a rational or Blaschke-terminated parameter sequence")]
    NonRationalBoundary,

    #[error("Caratheodory transform has a pole (z f = 1)")]
    Pole,

    #[error("Taylor data is not of a Schur function: parameter {index} has modulus {modulus}")]
    NotSchur { index: usize, modulus: f64 },

    #[error("product of Moebius maps degenerated to the zero matrix")]
    DegenerateProduct,

    #[error("m-function lost the Herglotz property at index {index}")]
    NonHerglotz { index: i64 },

    #[error("Wronskian vanishes; z is too close to the spectrum")]
    VanishingWronskian,

    #[error("rejection sampling failed at index {index} after {attempts} draws")]
    RejectionExhausted { index: i64, attempts: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
