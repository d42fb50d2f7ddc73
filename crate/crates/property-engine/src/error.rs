use thiserror::Error;
use transfun_core::TransfunError;

use crate::Axiom;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid spec: {reason}")]
    InvalidSpec { reason: String },

    #[error("invalid check config: {reason}")]
    InvalidConfig { reason: String },

    /// A statically proved axiom was refuted by the checker at the same
    /// tolerance. This indicates a defect in the rule table or the evaluator,
    /// not in the spec under test.
    #[error(
        "internal inconsistency: axiom '{axiom}' is statically proved but a trial found a violation of {violation}"
    )]
    InternalInconsistency { axiom: Axiom, violation: f64 },

    #[error(transparent)]
    Transfun(#[from] TransfunError),
}

impl From<measure_core::MeasureError> for EngineError {
    fn from(error: measure_core::MeasureError) -> Self {
        EngineError::Transfun(error.into())
    }
}
