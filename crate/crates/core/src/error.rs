use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A logarithm in a derivative criterion diverges (pure conditional
    /// state or vanishing diagonal entry).
    #[error("degenerate limit: {0}")]
    DegenerateLimit(&'static str),

    #[error("no sign change of C_theta on the open interval (0, pi/2)")]
    RootNotFound,

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
