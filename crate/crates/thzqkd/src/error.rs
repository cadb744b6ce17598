//! Error taxonomy shared across the crate.
//!
//! Three categories map onto the CLI exit codes: configuration/input problems
//! (`Validation`, exit 1), filesystem trouble (`Io`, exit 2), and states the
//! quantum-mechanical formulas cannot represent, such as a covariance matrix
//! with symplectic eigenvalues below the vacuum floor (`Physicality`, exit 3).

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad input: out-of-range parameter, malformed record, unknown field.
    #[error("validation: {0}")]
    Validation(String),

    /// Filesystem failure, annotated with the path involved.
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Numerically reachable but physically impossible state (e.g. a
    /// symplectic eigenvalue below 1 beyond rounding tolerance).
    #[error("physicality: {0}")]
    Physicality(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn physicality(msg: impl Into<String>) -> Self {
        Error::Physicality(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code for the CLI: 1 validation, 2 I/O, 3 physicality.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 1,
            Error::Io { .. } => 2,
            Error::Physicality(_) => 3,
        }
    }

    /// Prefixes the message with context (e.g. which subcarrier or scenario
    /// failed) while keeping the category, so exit codes survive wrapping.
    pub fn annotate(self, context: impl std::fmt::Display) -> Self {
        match self {
            Error::Validation(msg) => Error::Validation(format!("{context}: {msg}")),
            Error::Physicality(msg) => Error::Physicality(format!("{context}: {msg}")),
            io @ Error::Io { .. } => io,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_match_cli_contract() {
        assert_eq!(Error::validation("x").exit_code(), 1);
        let io = Error::io("/nope", std::io::Error::new(std::io::ErrorKind::NotFound, "gone"));
        assert_eq!(io.exit_code(), 2);
        assert_eq!(Error::physicality("x").exit_code(), 3);
    }

    #[test]
    fn io_error_names_the_path() {
        let e = Error::io("/data/lines.par", std::io::Error::new(std::io::ErrorKind::NotFound, "gone"));
        assert!(e.to_string().contains("/data/lines.par"));
    }
}
