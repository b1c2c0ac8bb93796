use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A ratio whose denominator vanished (zero field, zero curl, zero energy).
    #[error("undefined ratio: {0} is zero")]
    UndefinedRatio(&'static str),

    #[error("simulation diverged at step {step} (t = {time}): non-finite coefficients")]
    DivergedSimulation { step: usize, time: f64 },

    #[error("operation requires a {expected} field")]
    DomainMismatch { expected: &'static str },

    #[error("malformed field data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FlowError>;

pub(crate) fn invalid(msg: impl Into<String>) -> FlowError {
    FlowError::InvalidConfig(msg.into())
}
