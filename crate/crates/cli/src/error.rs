use std::fmt;

/// Failure classes map onto exit codes: 2 for unusable input (bad flags,
/// config or CSV), 1 for failures while running.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<glasd::Error> for CliError {
    fn from(e: glasd::Error) -> Self {
        use glasd::Error as E;
        match e {
            E::Malformed { .. }
            | E::Io { .. }
            | E::InvalidConfig(_)
            | E::InvalidScenario(_)
            | E::InvalidDimension(_)
            | E::InvalidDomain(_)
            | E::DomainMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
