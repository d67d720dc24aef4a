use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: u32 },

    #[error("variable-length representation supports values below 2^16, got {0}")]
    UnsupportedWidth(u64),

    #[error("bitstream exhausted: needed {needed} bits, {available} remaining")]
    Truncated { needed: usize, available: usize },

    #[error("bad magic: expected `SRLE`")]
    BadMagic,

    #[error("unsupported container version {0}")]
    BadVersion(u8),

    #[error("malformed container: {0}")]
    Corrupt(String),

    #[error("reconstructed length {actual} does not match header length {expected}")]
    LengthMismatch { expected: u64, actual: u64 },

    #[error("symbol id {id} out of dictionary range (size {size})")]
    UnknownSymbol { id: u64, size: usize },

    #[error("csv error at line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("raw input length {len} is not a multiple of element size {element_size}")]
    IndivisibleInput { len: usize, element_size: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
