use thiserror::Error;

/// Failure of a CLI run, grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error ({}): {source}", kind(source))]
    Numerical {
        #[from]
        source: phasewig_core::Error,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// Core errors raised while turning config values into objects are
    /// validation failures, not numerical ones.
    pub(crate) fn from_validation(context: &str, e: phasewig_core::Error) -> Self {
        use phasewig_core::Error as E;
        match e {
            E::InvalidGrid { .. } | E::GridMismatch(_) | E::InvalidInput(_) | E::NotReal { .. } => {
                CliError::Config(format!("{context}: {e}"))
            }
            other => other.into(),
        }
    }
}

fn kind(e: &phasewig_core::Error) -> &'static str {
    use phasewig_core::Error as E;
    match e {
        E::InvalidGrid { .. } => "InvalidGrid",
        E::GridMismatch(_) => "GridMismatch",
        E::Containment { .. } => "Containment",
        E::Orthogonal { .. } => "Orthogonal",
        E::Conditioning { .. } => "Conditioning",
        E::Coverage { .. } => "Coverage",
        E::NotReal { .. } => "NotReal",
        E::ZeroState => "ZeroState",
        E::InvalidInput(_) => "InvalidInput",
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
