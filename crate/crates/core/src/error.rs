use thiserror::Error;

/// Failure classes shared by every module.
///
/// The CLI maps these onto exit codes, so keep the variants coarse.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid parameters or configuration.
    #[error("config error: {0}")]
    Config(String),
    /// A query outside the support, an unreachable target, or a light-cone violation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine failed its own convergence check.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A statistical fit could not be carried out.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
