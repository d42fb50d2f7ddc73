use measure_core::MeasureError;
use thiserror::Error;

/// Errors from transfunction construction or evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransfunError {
    #[error(transparent)]
    Measure(#[from] MeasureError),

    #[error("invalid spec: {reason}")]
    InvalidSpec { reason: String },

    #[error("matrix is {rows}x{cols} but the spaces need {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("no column for domain atom '{label}'")]
    MissingColumn { label: String },

    #[error("column for '{label}' has mass {mass}, which reaches the declared bound {bound}")]
    BoundViolated { label: String, mass: f64, bound: f64 },
}

impl TransfunError {
    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        TransfunError::InvalidSpec {
            reason: reason.into(),
        }
    }
}
