use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("modulus {0} exceeds the supported maximum of 32749")]
    ModulusTooLarge(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("radius must be nonzero")]
    InvalidRadius,

    #[error("the two radii must differ (got t = t' = {0})")]
    InvalidPair(u32),

    #[error("point ({0}, {1}) is not an element of the ground set")]
    NotSubset(u32, u32),

    #[error("float-derived count {value} is {distance:e} away from the nearest integer")]
    ToleranceExceeded { value: f64, distance: f64 },

    #[error("the spectral counter is limited to q <= {cap} (got q = {q})")]
    FourierCap { q: u32, cap: u32 },

    #[error("point set is over F_{found} but F_{expected} was expected")]
    FieldMismatch { expected: u32, found: u32 },

    #[error("point ({0}, {1}) appears more than once")]
    DuplicatePoint(u32, u32),

    #[error("coordinate {value} is not a residue modulo {q}")]
    OutOfRange { value: u64, q: u32 },

    #[error("{quantity} cannot be computed with the {method} method")]
    UnsupportedMethod { quantity: &'static str, method: &'static str },

    #[error("density {0} is outside [0, 1]")]
    InvalidDensity(f64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
