use std::fmt;

/// Everything the harness can fail with, each mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    /// A config field is missing, malformed or out of range.
    Config { field: String, message: String },
    /// A library size limit was hit; the message is passed through verbatim.
    Cap(String),
    /// The results table given to `report` has no data rows.
    EmptyTable,
    Runtime(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), message: message.into() }
    }

    /// 1 for bad input, 2 for cap violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "config error in `{field}`: {message}"),
            CliError::Cap(msg) => f.write_str(msg),
            CliError::EmptyTable => f.write_str("results table is empty: nothing to report"),
            CliError::Runtime(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qbc::Error> for CliError {
    fn from(e: qbc::Error) -> Self {
        if e.is_cap_violation() {
            CliError::Cap(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("csv: {e}"))
    }
}
