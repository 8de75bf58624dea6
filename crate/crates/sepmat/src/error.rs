use thiserror::Error;

/// Errors produced by matrix/code parsing, property checks and decoders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty support")]
    EmptySupport,
    #[error("bad index: item {item} out of range 1..={n}")]
    BadIndex { item: usize, n: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("d out of range: d={d}, valid range {min}..={max}")]
    DOutOfRange { d: usize, min: usize, max: usize },
    #[error("oracle scale exceeded: {0}")]
    OracleScale(String),
    #[error("scale guard exceeded: {0}")]
    ScaleGuard(String),
    #[error("not separable: outcome matches more than one candidate support")]
    NotSeparable,
    #[error("code not reduced: words {first} and {second} are identical")]
    DuplicateWords { first: usize, second: usize },
    #[error("duplicate columns: {first} and {second} are identical")]
    DuplicateColumns { first: usize, second: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
