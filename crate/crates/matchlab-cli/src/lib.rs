//! Campaign runner, counterexample hunter, certificate store, and instance
//! I/O behind the `matchlab` binary.

pub mod campaign;
pub mod hunt;
pub mod io;
pub mod store;

use thiserror::Error;

/// CLI-level errors, mapped onto the exit-code contract:
/// `0` all checks passed, `1` a check failed (e.g. certificate rejected),
/// `2` theorem violation or internal contradiction, `3` usage/config error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(matchlab_core::Error),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<matchlab_core::Error> for CliError {
    fn from(e: matchlab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(matchlab_core::Error::TheoremViolation(_))
            | CliError::Core(matchlab_core::Error::Internal(_)) => 2,
            CliError::CheckFailed(_) => 1,
            CliError::Io(_) => 3,
            CliError::Usage(_) => 3,
            CliError::Core(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        let theorem = CliError::Core(matchlab_core::Error::TheoremViolation("x".into()));
        assert_eq!(theorem.exit_code(), 2);
        let internal = CliError::Core(matchlab_core::Error::Internal("x".into()));
        assert_eq!(internal.exit_code(), 2);
        assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 3);
        let config = CliError::Core(matchlab_core::Error::NotPrime(4));
        assert_eq!(config.exit_code(), 3);
    }
}
