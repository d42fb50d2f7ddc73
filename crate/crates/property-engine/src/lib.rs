//! Property engine for transfunctions.
//!
//! Decides which of the seven transfunction properties — weak and strong
//! additivity, homogeneity, monotonicity, measure preservation, boundedness,
//! and total-variation continuity — hold for a given constructor tree, two
//! ways:
//!
//! * [`infer_properties`] walks the tree with a table of algebraic rules and
//!   returns `Proved`, constructively `RefutedWithWitness`, or `Unknown`
//!   per axiom.
//! * [`check_axiom`] / [`check_all`] run seeded randomized trials with
//!   per-axiom input generators and refute with replayable witnesses.
//!
//! [`check_all`] reconciles the two: a statically proved axiom that fails a
//! trial raises [`EngineError::InternalInconsistency`], which signals a bug
//! in this workspace rather than a property of the spec under test.
//!
//! All randomness is derived from the [`CheckConfig`] seed through per-trial
//! sub-seeds, so identical inputs produce byte-identical reports.

mod axiom;
mod check;
mod config;
pub mod corpus;
mod error;
mod infer;
pub mod generators;
mod report;

pub use axiom::Axiom;
pub use check::{
    check_all, check_axiom, check_axioms, estimate_bound, replay_violation,
};
pub use config::CheckConfig;
pub use error::EngineError;
pub use infer::infer_properties;
pub use report::{spec_digest, PropertyReport, Status, Verdict, Witness};
