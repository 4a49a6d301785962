use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("index ({row}, {col}) out of bounds for a {n_rows}x{n_cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),

    #[error("descriptor field overflow: {field} = {value} needs more than {bits} bits")]
    FieldOverflow {
        field: &'static str,
        value: u64,
        bits: u32,
    },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("corrupt tile metadata: {0}")]
    Corrupt(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver breakdown: {0}")]
    Breakdown(String),
}
