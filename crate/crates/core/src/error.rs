use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bit vectors must have at least one coordinate")]
    EmptyVector,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("coordinate {coordinate} outside 1..={len}")]
    CoordinateOutOfRange { coordinate: usize, len: usize },
    #[error("vector of length {len} does not fit a 64-bit index")]
    TooLongForIndex { len: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cube dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("input length must be odd, got {0}")]
    EvenLength(usize),
    #[error("{vector} is not in the Hamming ball (weight must exceed {half_n})")]
    NotInBall { vector: String, half_n: usize },
    #[error("{vector} is not in the image of the bijection")]
    NotInImage { vector: String },
    #[error("level {level} outside chain range {bottom}..={top}")]
    LevelOutOfRange { level: usize, bottom: usize, top: usize },
    #[error("invalid chain code: {0}")]
    InvalidChainCode(String),
    #[error("enumeration cap exceeded: {what} above cap {cap}")]
    CapExceeded { what: String, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyVector => "empty_vector",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::CoordinateOutOfRange { .. } => "coordinate_out_of_range",
            Error::TooLongForIndex { .. } => "too_long_for_index",
            Error::Parse(_) => "parse",
            Error::OddDimension(_) => "odd_dimension",
            Error::EvenLength(_) => "even_length",
            Error::NotInBall { .. } => "not_in_ball",
            Error::NotInImage { .. } => "not_in_image",
            Error::LevelOutOfRange { .. } => "level_out_of_range",
            Error::InvalidChainCode(_) => "invalid_chain_code",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
