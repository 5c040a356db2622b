use std::fmt;
use std::process::ExitCode;

/// Exit status of a subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 2,
    /// Unreadable, malformed or misaligned inputs.
    Input = 3,
    /// Failures while computing or writing outputs.
    Processing = 4,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl fmt::Display) -> Self {
        CliError {
            status: Status::Usage,
            message: message.to_string(),
        }
    }

    pub fn input(message: impl fmt::Display) -> Self {
        CliError {
            status: Status::Input,
            message: message.to_string(),
        }
    }

    pub fn processing(message: impl fmt::Display) -> Self {
        CliError {
            status: Status::Processing,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Tags a core error with the exit status it should map to.
pub trait Classify<T> {
    fn input(self) -> CliResult<T>;
    fn processing(self) -> CliResult<T>;
}

impl<T, E: fmt::Display> Classify<T> for std::result::Result<T, E> {
    fn input(self) -> CliResult<T> {
        self.map_err(CliError::input)
    }

    fn processing(self) -> CliResult<T> {
        self.map_err(CliError::processing)
    }
}
