use thiserror::Error;

/// Errors produced while building states, operators and arrays.
#[derive(Debug, Error)]
pub enum Error {
    #[error("channel {k} is out of range 1..={dim}")]
    ChannelOutOfRange { k: usize, dim: usize },

    #[error("channel {0} appears more than once")]
    DuplicateChannel(usize),

    #[error("superposition has no terms")]
    EmptySuperposition,

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("state norm {norm} differs from 1 by more than {tol:e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("array size p must be at least 1, got {0}")]
    InvalidSize(usize),

    #[error("device ({m},{n}) lies outside the {p}x{p} grid")]
    DeviceOutOfGrid { m: usize, n: usize, p: usize },

    #[error("diagonal index r={r} is out of range 1..={max} for p={p}", max = 2 * p - 1)]
    DiagonalOutOfRange { r: usize, p: usize },

    #[error("transmission {0} is outside [0, 100] percent")]
    TransmissionOutOfRange(f64),

    #[error("mixing angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense operators are limited to p <= {cap}, got p={p}")]
    DenseCapExceeded { p: usize, cap: usize },

    #[error("no mixing angle given for device ({m},{n})")]
    MissingDevice { m: usize, n: usize },

    #[error("device ({m},{n}) is assigned more than once")]
    DuplicateDevice { m: usize, n: usize },

    #[error("invalid {what} `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("theta map line {line}: {reason}")]
    ThetaMap { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_error(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
