use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("intersection form is singular (nullity {nullity})")]
    Singular { nullity: usize },
    #[error("not a 3-singular-fiber space: {0}")]
    NotThreeFibers(String),
    #[error("diagram is not star-shaped with a designated center")]
    NotStar,
    #[error("enumeration of {count} structures exceeds the cap of {cap}")]
    CapExceeded { count: String, cap: u64 },
    #[error("template error: {0}")]
    Template(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
