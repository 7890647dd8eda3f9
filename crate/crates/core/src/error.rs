use thiserror::Error;

/// Errors raised by samplers, calculators and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("simulation method failed: {0}")]
    Simulation(String),

    #[error("missing small-deviation constant c(H) for H = {0}; supply it explicitly")]
    MissingConstant(f64),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
