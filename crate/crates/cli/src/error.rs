use merbit_core::Error;

/// Process exit codes. Clap reports usage errors with code 2 on its own.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VALIDATION: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PARSE: u8 = 4;
    pub const INFEASIBLE: u8 = 5;
    pub const BREAKDOWN: u8 = 6;
    pub const DIMENSION: u8 = 7;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Validation(String),
    #[error("solver breakdown: {0}")]
    Breakdown(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Breakdown(_) => exit::BREAKDOWN,
            CliError::Output(_) => exit::IO,
            CliError::Core(e) => match e {
                Error::Io(_) => exit::IO,
                Error::Parse { .. } | Error::Unsupported(_) | Error::IndexOutOfBounds { .. } | Error::InvalidMatrix(_) => {
                    exit::PARSE
                }
                Error::DimensionMismatch { .. } => exit::DIMENSION,
                Error::InfeasibleConfig(_)
                | Error::FieldOverflow { .. }
                | Error::Capacity(_)
                | Error::ConfigMismatch(_) => exit::INFEASIBLE,
                Error::Corrupt(_) => exit::VALIDATION,
                Error::Breakdown(_) => exit::BREAKDOWN,
                Error::InvalidArgument(_) => exit::USAGE,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
