use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must live in the same space do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A zero-dimensional space was requested.
    EmptyDimension,
    /// A matrix claimed to be unitary is not, `residual` is `max |U*U - I|`.
    NotUnitary { residual: f64 },
    /// A matrix claimed to be an orthogonal projector is not.
    NotProjector { residual: f64 },
    /// A vector that must have unit norm does not.
    NotNormalized { norm: f64 },
    InvalidDistribution(String),
    AlphabetMismatch { left: usize, right: usize },
    InvalidParameter(String),
    /// The two distributions coincide, so there is nothing to distinguish.
    IdenticalDistributions,
    /// A vector required to be orthogonal to the reference state `e0` is not.
    NotOrthogonalToReference { overlap: f64 },
    /// A precondition on the kernel of a projector does not hold.
    NotInKernel { residual: f64 },
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    /// Model (i) needs every probability to be a multiple of `1/n`.
    FrequencyConstraint { symbol: usize, scaled: f64 },
    /// The witness bilinear form has no positive orientation.
    DegenerateWitness { overlap: f64 },
    /// An explicit tensor construction would exceed the configured size.
    TensorTooLarge { dim: usize, limit: usize },
    /// A dense decomposition did not converge.
    Decomposition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyDimension => f.write_str("dimension must be positive"),
            Error::NotUnitary { residual } => {
                write!(f, "matrix is not unitary (max |U*U - I| = {residual:e})")
            }
            Error::NotProjector { residual } => {
                write!(f, "matrix is not an orthogonal projector (residual {residual:e})")
            }
            Error::NotNormalized { norm } => write!(f, "vector is not normalized (norm {norm})"),
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet sizes differ: {left} vs {right}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::IdenticalDistributions => f.write_str("the two distributions are identical"),
            Error::NotOrthogonalToReference { overlap } => {
                write!(f, "state has overlap {overlap:e} with the reference vector e0")
            }
            Error::NotInKernel { residual } => {
                write!(f, "vector is not in the kernel of the projector (residual {residual:e})")
            }
            Error::SymbolOutOfRange { symbol, alphabet } => {
                write!(f, "symbol {symbol} is outside the alphabet of size {alphabet}")
            }
            Error::FrequencyConstraint { symbol, scaled } => write!(
                f,
                "probability of symbol {symbol} is not a multiple of 1/n (n*p = {scaled})"
            ),
            Error::DegenerateWitness { overlap } => {
                write!(f, "witness normalization sum is not positive ({overlap:e})")
            }
            Error::TensorTooLarge { dim, limit } => {
                write!(f, "tensor dimension {dim} exceeds the limit {limit}")
            }
            Error::Decomposition(what) => write!(f, "{what} did not converge"),
        }
    }
}

impl core::error::Error for Error {}
