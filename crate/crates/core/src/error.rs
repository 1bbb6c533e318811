use alloc::string::String;

pub type VoiResult<T> = core::result::Result<T, VoiError>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VoiError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A named parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("non-finite utility {value} for action `{action}` at sample index {index}")]
    NonFiniteUtility { action: String, index: u64, value: f64 },

    /// The ground model cannot hold the fluid temperature bound even without extraction.
    #[error("fluid temperature {temperature:.3} °C violates bounds at hour {hour} with zero extraction")]
    InfeasibleDispatch { hour: usize, temperature: f64 },

    #[error("load profile rejected: {0}")]
    LoadProfile(String),
}

impl VoiError {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        VoiError::InvalidParameter { name: name.into(), reason: reason.into() }
    }

    /// True for failures raised by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, VoiError::NonFiniteUtility { .. } | VoiError::InfeasibleDispatch { .. })
    }
}
