use thiserror::Error;

/// A function argument outside its documented domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid parameter: {0}")]
pub struct ParameterError(pub String);

impl ParameterError {
    pub(crate) fn new(message: impl Into<String>) -> Self {
        Self(message.into())
    }
}
