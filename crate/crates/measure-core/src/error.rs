use thiserror::Error;

/// Errors raised by measure and space construction or arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("atom '{label}' is not in space '{space}'")]
    UnknownAtom { label: String, space: String },

    #[error("negative mass {value} for atom '{label}'")]
    NegativeMass { label: String, value: f64 },

    #[error("non-finite value {value} for {context}")]
    NonFinite { context: String, value: f64 },

    #[error("negative scalar {value}")]
    NegativeScalar { value: f64 },

    #[error("space mismatch: '{left}' vs '{right}'")]
    SpaceMismatch { left: String, right: String },

    #[error("invalid space '{space}': {reason}")]
    InvalidSpace { space: String, reason: String },
}

impl MeasureError {
    pub(crate) fn unknown_atom(label: &str, space: &crate::Space) -> Self {
        MeasureError::UnknownAtom {
            label: label.to_string(),
            space: space.id().to_string(),
        }
    }

    pub(crate) fn mismatch(left: &crate::Space, right: &crate::Space) -> Self {
        MeasureError::SpaceMismatch {
            left: left.id().to_string(),
            right: right.id().to_string(),
        }
    }
}
