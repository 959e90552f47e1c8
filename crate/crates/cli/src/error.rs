use std::fmt;

use loadfpca::Error as CoreError;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Usage = 1,
    Data = 2,
    Numerical = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Usage, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Data, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Numerical, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind as i32
    }

    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let kind = match &e {
            CoreError::Config(_) => ExitKind::Usage,
            CoreError::InsufficientData { .. }
            | CoreError::InvalidComponentCount { .. }
            | CoreError::TruncationTooLarge { .. }
            | CoreError::DegenerateVariance
            | CoreError::RankDeficientDesign
            | CoreError::ShapeMismatch(_)
            | CoreError::ZeroScale
            | CoreError::ZeroTotalEnergy
            | CoreError::ZeroVarianceActual
            | CoreError::ZeroActualNorm
            | CoreError::ZeroVariance
            | CoreError::ZeroAverage
            | CoreError::DivisionByZeroActual { .. }
            | CoreError::NonFinite => ExitKind::Numerical,
            _ => ExitKind::Data,
        };
        Self { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::data(e.to_string())
    }
}
