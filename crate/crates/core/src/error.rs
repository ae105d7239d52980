use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("value {value} exceeds the sequence capacity {cap}")]
    ValueTooLarge { value: u64, cap: u64 },

    #[error("symbol code {0} is not part of the alphabet")]
    UnknownSymbol(u32),

    #[error("the sentinel symbol {0} cannot be prepended or searched for")]
    SentinelSymbol(u32),

    #[error("text capacity {0} exceeded")]
    CapacityExceeded(usize),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid snapshot: {0}")]
    InvalidSnapshot(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
