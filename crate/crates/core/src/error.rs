use alloc::string::String;

/// Errors raised by the information engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    /// Coordinates are 1-based positions in the source text.
    #[error("cannot parse {text:?} at row {row}, column {col}")]
    Parse { row: usize, col: usize, text: String },
    #[error("non-finite value at row {row}, column {col}")]
    Value { row: usize, col: usize },
    #[error("duplicate label {0:?}")]
    Label(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("subset error: {0}")]
    Subset(String),
    #[error("distribution error: {0}")]
    Distribution(String),
    #[error("{n} variables exceed the enumeration guard of {limit}; pass the override to proceed")]
    Capacity { n: usize, limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
