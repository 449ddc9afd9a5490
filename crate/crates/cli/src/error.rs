use std::fmt;
use std::process::ExitCode;

use inflated_beam::BeamError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input files.
    Validation(String),
    /// The requested state is past the collapse limit.
    Collapse(String),
    /// Solver or output failure.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Collapse(_) => ExitCode::from(3),
            CliError::Runtime(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Collapse(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<BeamError> for CliError {
    fn from(e: BeamError) -> Self {
        match e {
            BeamError::Collapse { .. } => CliError::Collapse(e.to_string()),
            BeamError::Integration(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
