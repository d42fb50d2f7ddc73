use measure_core::MeasureDoc;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use transfun_core::{spec_to_value, Transfunction};

use crate::{Axiom, CheckConfig};

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Established by a static rule.
    Proved,
    /// A concrete counterexample was found; the witness replays.
    RefutedWithWitness,
    /// All randomized trials passed; not a proof.
    PassedTrials,
    /// Neither proved statically nor decided by trials.
    Unknown,
}

/// A replayable counterexample. Measures are embedded as full documents so a
/// replay needs no random state; `violation` is the recorded magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Φ(μ₁+μ₂) ≠ Φ(μ₁)+Φ(μ₂)`; violation is the total-variation gap.
    Additivity {
        mu1: MeasureDoc,
        mu2: MeasureDoc,
        lhs: MeasureDoc,
        rhs: MeasureDoc,
        violation: f64,
    },
    /// `Φ(αμ) ≠ αΦ(μ)`; violation is the total-variation gap.
    Homogeneity {
        alpha: f64,
        mu: MeasureDoc,
        lhs: MeasureDoc,
        rhs: MeasureDoc,
        violation: f64,
    },
    /// `μ₁ ≤ μ₂` but `Φ(μ₁) ≰ Φ(μ₂)`; violation is the largest atomwise excess.
    Monotonicity {
        mu1: MeasureDoc,
        mu2: MeasureDoc,
        out1: MeasureDoc,
        out2: MeasureDoc,
        violation: f64,
    },
    /// `‖Φ(μ)‖ ≠ ‖μ‖`; violation is the absolute mass defect.
    MassDefect {
        mu: MeasureDoc,
        input_mass: f64,
        output_mass: f64,
        violation: f64,
    },
    /// `‖Φ(μ)‖ > C‖μ‖` for the statically proved constant `bound`.
    BoundExceeded {
        mu: MeasureDoc,
        ratio: f64,
        bound: f64,
        violation: f64,
    },
    /// The mass ratio `‖Φ(μ)‖/‖μ‖` grew by `violation` (a factor) between the
    /// two stored inputs, witnessing unboundedness along a mass scale sweep.
    RatioDivergence {
        mu_first: MeasureDoc,
        mu_last: MeasureDoc,
        ratio_first: f64,
        ratio_last: f64,
        violation: f64,
    },
    /// One term of a convergent sequence broke the Lipschitz bound
    /// `d(Φμₖ, Φμ) ≤ modulus · d(μₖ, μ)`.
    ContinuityTerm {
        target: MeasureDoc,
        term: MeasureDoc,
        input_distance: f64,
        output_distance: f64,
        modulus: f64,
        violation: f64,
    },
    /// Output distances failed to decay along a geometrically convergent
    /// input sequence: the last term exceeded `allowed`.
    ContinuityDecay {
        target: MeasureDoc,
        first_term: MeasureDoc,
        last_term: MeasureDoc,
        first_distance: f64,
        last_distance: f64,
        allowed: f64,
        decay_steps: u32,
        violation: f64,
    },
}

impl Witness {
    pub fn violation(&self) -> f64 {
        match self {
            Witness::Additivity { violation, .. }
            | Witness::Homogeneity { violation, .. }
            | Witness::Monotonicity { violation, .. }
            | Witness::MassDefect { violation, .. }
            | Witness::BoundExceeded { violation, .. }
            | Witness::RatioDivergence { violation, .. }
            | Witness::ContinuityTerm { violation, .. }
            | Witness::ContinuityDecay { violation, .. } => *violation,
        }
    }
}

/// Per-axiom result. `constant` holds the bound `C` for `bounded` and the
/// total-variation modulus for `continuous`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub axiom: Axiom,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// The report document: digest of the spec, the config used (absent for
/// static-only reports), and one verdict per requested axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub spec_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<CheckConfig>,
    pub verdicts: Vec<Verdict>,
}

impl PropertyReport {
    /// Pretty-printed JSON with a trailing newline; byte-deterministic.
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn verdict(&self, axiom: Axiom) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }
}

/// SHA-256 of the canonical compact JSON serialization of the spec.
pub fn spec_digest(spec: &Transfunction) -> String {
    let canonical = serde_json::to_string(&spec_to_value(spec)).expect("spec serialization");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}
