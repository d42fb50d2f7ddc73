//! Static algebraic inference over constructor trees.
//!
//! Each rule is a one-line consequence of the defining formula of a node:
//! linear leaves (pushforward, matrix, countable matrix, kernel) are strongly
//! additive, homogeneous, monotone, and bounded by their largest column mass,
//! which is also their total-variation modulus; pushforwards and unit-column
//! leaves preserve mass. Density multipliers and projections preserve the
//! linear properties (scaling the constants by the density supremum),
//! `max_with` preserves monotonicity and the modulus (the join is 1-Lipschitz
//! per atom), semigroup products preserve monotonicity and are refuted
//! constructively for homogeneity and additivity, and composition intersects
//! its children's proofs, multiplying constants.
//!
//! Anything not provable or refutable by these rules is `Unknown` and left to
//! the randomized checker.

use measure_core::{Measure, MeasureDoc};
use transfun_core::{Node, Transfunction};

use crate::report::{PropertyReport, Status, Verdict, Witness};
use crate::{spec_digest, Axiom, EngineError};

/// Column masses within this distance of 1 are proved mass-preserving; the
/// engine takes no config, so the thresholds are fixed. They are chosen so a
/// proof here can never be refuted at the checker's default 1e-9 tolerance.
pub(crate) const STATIC_PROVE_TOL: f64 = 1e-12;
/// Deviations above this are refuted with a verified point-mass witness.
pub(crate) const STATIC_REFUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    Proved { constant: Option<f64> },
    Refuted { witness: Witness },
    Unknown,
}

impl Outcome {
    fn proved() -> Outcome {
        Outcome::Proved { constant: None }
    }

    fn proved_with(constant: f64) -> Outcome {
        Outcome::Proved {
            constant: Some(constant),
        }
    }

    pub(crate) fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved { .. })
    }

    /// Keeps a proof (and its constant); anything else becomes Unknown.
    fn kept(&self) -> Outcome {
        match self {
            Outcome::Proved { constant } => Outcome::Proved {
                constant: *constant,
            },
            _ => Outcome::Unknown,
        }
    }

    /// Keeps a proof with its constant scaled by `factor`.
    fn scaled(&self, factor: f64) -> Outcome {
        match self {
            Outcome::Proved { constant } => Outcome::Proved {
                constant: constant.map(|c| c * factor),
            },
            _ => Outcome::Unknown,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Analysis {
    pub weakly_additive: Outcome,
    pub strongly_additive: Outcome,
    pub homogeneous: Outcome,
    pub monotone: Outcome,
    pub measure_preserving: Outcome,
    pub bounded: Outcome,
    pub continuous: Outcome,
}

impl Analysis {
    fn unknown() -> Analysis {
        Analysis {
            weakly_additive: Outcome::Unknown,
            strongly_additive: Outcome::Unknown,
            homogeneous: Outcome::Unknown,
            monotone: Outcome::Unknown,
            measure_preserving: Outcome::Unknown,
            bounded: Outcome::Unknown,
            continuous: Outcome::Unknown,
        }
    }

    pub(crate) fn outcome(&self, axiom: Axiom) -> &Outcome {
        match axiom {
            Axiom::WeaklyAdditive => &self.weakly_additive,
            Axiom::StronglyAdditive => &self.strongly_additive,
            Axiom::Homogeneous => &self.homogeneous,
            Axiom::Monotone => &self.monotone,
            Axiom::MeasurePreserving => &self.measure_preserving,
            Axiom::Bounded => &self.bounded,
            Axiom::Continuous => &self.continuous,
        }
    }

    /// The proved bound constant `C` with `‖Φμ‖ ≤ C‖μ‖`, when known.
    pub(crate) fn bound_constant(&self) -> Option<f64> {
        match &self.bounded {
            Outcome::Proved { constant } => *constant,
            _ => None,
        }
    }

    /// The proved total-variation Lipschitz modulus, when known.
    pub(crate) fn modulus(&self) -> Option<f64> {
        match &self.continuous {
            Outcome::Proved { constant } => *constant,
            _ => None,
        }
    }

    /// Strong additivity implies weak additivity; mass preservation implies
    /// the exact bound `C = 1`.
    fn with_implications(mut self) -> Analysis {
        if self.strongly_additive.is_proved() && !self.weakly_additive.is_proved() {
            self.weakly_additive = Outcome::proved();
        }
        if self.measure_preserving.is_proved() {
            self.bounded = Outcome::proved_with(1.0);
        }
        self
    }
}

/// Rejects specs the engine cannot sample: every countable-matrix node must
/// have a column for every domain atom, or random inputs would fail to apply.
pub(crate) fn ensure_checkable(spec: &Transfunction) -> Result<(), EngineError> {
    if !spec.has_total_columns() {
        return Err(EngineError::InvalidSpec {
            reason: "a countable_matrix node is missing columns for some domain atoms; \
                     property checking needs a column per atom"
                .to_string(),
        });
    }
    Ok(())
}

pub(crate) fn analyze(spec: &Transfunction) -> Result<Analysis, EngineError> {
    let analysis = match spec.node() {
        Node::Pushforward { .. } => Analysis {
            weakly_additive: Outcome::proved(),
            strongly_additive: Outcome::proved(),
            homogeneous: Outcome::proved(),
            monotone: Outcome::proved(),
            measure_preserving: Outcome::proved(),
            bounded: Outcome::proved_with(1.0),
            continuous: Outcome::proved_with(1.0),
        },
        Node::Matrix { entries } => {
            let cols = spec.domain().atom_count();
            let sums: Vec<f64> = (0..cols)
                .map(|j| entries.iter().map(|row| row[j]).sum())
                .collect();
            linear_leaf(spec, &sums)?
        }
        Node::CountableMatrix { columns, .. } => {
            let sums: Vec<f64> = columns
                .iter()
                .map(|c| c.as_ref().map_or(f64::NAN, |m| m.iter().sum()))
                .collect();
            if sums.iter().any(|s| s.is_nan()) {
                return Err(EngineError::InvalidSpec {
                    reason: "countable_matrix columns must be total for inference".to_string(),
                });
            }
            linear_leaf(spec, &sums)?
        }
        Node::Kernel { phi, rho } => {
            let sums: Vec<f64> = phi
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(rho.masses())
                        .map(|(p, r)| p * r)
                        .sum()
                })
                .collect();
            linear_leaf(spec, &sums)?
        }
        Node::OutputMultiplier { weights, inner } => {
            let sup = weights.iter().cloned().fold(0.0, f64::max);
            multiplier(analyze(inner)?, sup)
        }
        Node::InputMultiplier { weights, inner } => {
            let sup = weights.iter().cloned().fold(0.0, f64::max);
            multiplier(analyze(inner)?, sup)
        }
        Node::MaxWith { inner, .. } => {
            let a = analyze(inner)?;
            Analysis {
                monotone: a.monotone.kept(),
                // The join with a fixed measure is 1-Lipschitz atomwise, so
                // the inner modulus carries over even though the bound
                // through the origin does not.
                continuous: a.continuous.kept(),
                ..Analysis::unknown()
            }
        }
        Node::PreProject { inner, .. } | Node::PostProject { inner, .. } => {
            let a = analyze(inner)?;
            Analysis {
                weakly_additive: a.weakly_additive.kept(),
                strongly_additive: a.strongly_additive.kept(),
                homogeneous: a.homogeneous.kept(),
                monotone: a.monotone.kept(),
                measure_preserving: Outcome::Unknown,
                bounded: a.bounded.kept(),
                continuous: a.continuous.kept(),
            }
        }
        Node::SemigroupProduct { left, right, .. } => {
            let la = analyze(left)?;
            let ra = analyze(right)?;
            let monotone = if la.monotone.is_proved() && ra.monotone.is_proved() {
                Outcome::proved()
            } else {
                Outcome::Unknown
            };
            Analysis {
                monotone,
                homogeneous: refute_homogeneity(spec)?,
                strongly_additive: refute_additivity(spec, false)?,
                weakly_additive: refute_additivity(spec, true)?,
                ..Analysis::unknown()
            }
        }
        Node::Compose { outer, inner } => {
            let oa = analyze(outer)?;
            let ia = analyze(inner)?;
            compose(oa, ia)
        }
    };
    Ok(analysis.with_implications())
}

/// Rules shared by the linear leaf nodes, driven by the per-domain-atom
/// output mass of a unit point mass (the "column sums").
fn linear_leaf(spec: &Transfunction, sums: &[f64]) -> Result<Analysis, EngineError> {
    let norm = sums.iter().cloned().fold(0.0, f64::max);
    let deviation = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    let measure_preserving = if deviation <= STATIC_PROVE_TOL {
        Outcome::proved()
    } else if deviation > STATIC_REFUTE_TOL {
        // Verified point-mass witness at the worst column.
        let worst = sums
            .iter()
            .enumerate()
            .max_by(|a, b| {
                let da = (a.1 - 1.0).abs();
                let db = (b.1 - 1.0).abs();
                da.partial_cmp(&db).unwrap()
            })
            .map(|(j, _)| j)
            .unwrap();
        let dirac = Measure::dirac(spec.domain(), spec.domain().label(worst), 1.0)?;
        let out = spec.apply(&dirac)?;
        let violation = (out.total_mass() - dirac.total_mass()).abs();
        if violation > STATIC_REFUTE_TOL {
            Outcome::Refuted {
                witness: Witness::MassDefect {
                    mu: MeasureDoc::from_measure(&dirac),
                    input_mass: dirac.total_mass(),
                    output_mass: out.total_mass(),
                    violation,
                },
            }
        } else {
            Outcome::Unknown
        }
    } else {
        Outcome::Unknown
    };
    Ok(Analysis {
        weakly_additive: Outcome::proved(),
        strongly_additive: Outcome::proved(),
        homogeneous: Outcome::proved(),
        monotone: Outcome::proved(),
        measure_preserving,
        bounded: Outcome::proved_with(norm),
        continuous: Outcome::proved_with(norm),
    })
}

fn multiplier(inner: Analysis, sup: f64) -> Analysis {
    Analysis {
        weakly_additive: inner.weakly_additive.kept(),
        strongly_additive: inner.strongly_additive.kept(),
        homogeneous: inner.homogeneous.kept(),
        monotone: inner.monotone.kept(),
        measure_preserving: Outcome::Unknown,
        bounded: inner.bounded.scaled(sup),
        continuous: inner.continuous.scaled(sup),
    }
}

fn compose(outer: Analysis, inner: Analysis) -> Analysis {
    let both = |a: &Outcome, b: &Outcome| {
        if a.is_proved() && b.is_proved() {
            Outcome::proved()
        } else {
            Outcome::Unknown
        }
    };
    let multiply = |a: &Outcome, b: &Outcome| match (a, b) {
        (Outcome::Proved { constant: ca }, Outcome::Proved { constant: cb }) => Outcome::Proved {
            constant: ca.zip(*cb).map(|(x, y)| x * y),
        },
        _ => Outcome::Unknown,
    };
    Analysis {
        // Weak additivity of the inner map only survives if the outer map is
        // additive on arbitrary pairs: the inner images of a singular pair
        // need not be singular.
        weakly_additive: both(&inner.weakly_additive, &outer.strongly_additive),
        strongly_additive: both(&inner.strongly_additive, &outer.strongly_additive),
        homogeneous: both(&inner.homogeneous, &outer.homogeneous),
        monotone: both(&inner.monotone, &outer.monotone),
        measure_preserving: both(&inner.measure_preserving, &outer.measure_preserving),
        bounded: multiply(&outer.bounded, &inner.bounded),
        continuous: multiply(&outer.continuous, &inner.continuous),
    }
}

/// Constructive homogeneity refutation: a semigroup product of homogeneous
/// factors scales as α², so α = 2 breaks homogeneity on any input with a
/// nonzero product image. Candidates are verified by evaluation.
fn refute_homogeneity(spec: &Transfunction) -> Result<Outcome, EngineError> {
    let alpha = 2.0;
    for mu in homogeneity_candidates(spec) {
        let scaled_in = spec.apply(&mu.scale(alpha).expect("alpha is valid"))?;
        let scaled_out = spec.apply(&mu)?.scale(alpha).expect("alpha is valid");
        let violation = scaled_in.tv_distance(&scaled_out)?;
        if violation > STATIC_REFUTE_TOL {
            return Ok(Outcome::Refuted {
                witness: Witness::Homogeneity {
                    alpha,
                    mu: MeasureDoc::from_measure(&mu),
                    lhs: MeasureDoc::from_measure(&scaled_in),
                    rhs: MeasureDoc::from_measure(&scaled_out),
                    violation,
                },
            });
        }
    }
    Ok(Outcome::Unknown)
}

fn homogeneity_candidates(spec: &Transfunction) -> Vec<Measure> {
    let domain = spec.domain();
    let mut out = Vec::new();
    let uniform = |mass: f64| {
        Measure::from_masses(domain, vec![mass; domain.atom_count()]).expect("valid masses")
    };
    out.push(uniform(2.0));
    out.push(uniform(0.5));
    for atom in domain.atoms() {
        out.push(Measure::dirac(domain, atom, 2.0).expect("atom exists"));
    }
    out
}

/// Constructive additivity refutation via the cross terms of
/// `(Φ(μ₁+μ₂) × Ψ(μ₁+μ₂))`. For `singular_only`, candidate pairs are
/// mutually singular by construction.
fn refute_additivity(spec: &Transfunction, singular_only: bool) -> Result<Outcome, EngineError> {
    for (mu1, mu2) in additivity_candidates(spec, singular_only) {
        let lhs = spec.apply(&mu1.add(&mu2)?)?;
        let rhs = spec.apply(&mu1)?.add(&spec.apply(&mu2)?)?;
        let violation = lhs.tv_distance(&rhs)?;
        if violation > STATIC_REFUTE_TOL {
            return Ok(Outcome::Refuted {
                witness: Witness::Additivity {
                    mu1: MeasureDoc::from_measure(&mu1),
                    mu2: MeasureDoc::from_measure(&mu2),
                    lhs: MeasureDoc::from_measure(&lhs),
                    rhs: MeasureDoc::from_measure(&rhs),
                    violation,
                },
            });
        }
    }
    Ok(Outcome::Unknown)
}

fn additivity_candidates(
    spec: &Transfunction,
    singular_only: bool,
) -> Vec<(Measure, Measure)> {
    let domain = spec.domain();
    let n = domain.atom_count();
    let dirac = |i: usize| Measure::dirac(domain, domain.label(i), 1.0).expect("atom exists");
    let mut out = Vec::new();
    if singular_only {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push((dirac(i), dirac(j)));
                }
            }
        }
        if n >= 2 {
            let half = n / 2;
            let first =
                Measure::from_entries(domain, (0..half).map(|i| (domain.label(i), 1.0)))
                    .expect("valid masses");
            let second =
                Measure::from_entries(domain, (half..n).map(|i| (domain.label(i), 1.0)))
                    .expect("valid masses");
            out.push((first, second));
        }
    } else {
        let uniform =
            Measure::from_masses(domain, vec![1.0; n]).expect("valid masses");
        out.push((uniform.clone(), uniform.clone()));
        for i in 0..n {
            for j in 0..n {
                out.push((dirac(i), dirac(j)));
            }
        }
        out.push((uniform, dirac(0)));
    }
    out
}

/// Static-only report: one verdict per axiom from the rule table, no trials.
pub fn infer_properties(spec: &Transfunction) -> Result<PropertyReport, EngineError> {
    ensure_checkable(spec)?;
    let analysis = analyze(spec)?;
    let verdicts = Axiom::ALL
        .into_iter()
        .map(|axiom| match analysis.outcome(axiom) {
            Outcome::Proved { constant } => Verdict {
                axiom,
                status: Status::Proved,
                constant: *constant,
                witness: None,
            },
            Outcome::Refuted { witness } => Verdict {
                axiom,
                status: Status::RefutedWithWitness,
                constant: None,
                witness: Some(witness.clone()),
            },
            Outcome::Unknown => Verdict {
                axiom,
                status: Status::Unknown,
                constant: None,
                witness: None,
            },
        })
        .collect();
    Ok(PropertyReport {
        spec_digest: spec_digest(spec),
        config: None,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use measure_core::Space;

    use super::*;

    fn space(id: &str, n: usize) -> Space {
        Space::new(id, (0..n).map(|i| format!("{}{i}", id.to_lowercase()))).unwrap()
    }

    fn zn_conv(n: usize) -> Transfunction {
        let zn = Space::new(format!("Z{n}"), (0..n).map(|i| format!("z{i}"))).unwrap();
        let mut op = BTreeMap::new();
        for u in 0..n {
            for v in 0..n {
                op.insert(
                    (format!("z{u}"), format!("z{v}")),
                    format!("z{}", (u + v) % n),
                );
            }
        }
        Transfunction::semigroup_product(
            Transfunction::identity(&zn),
            Transfunction::identity(&zn),
            &op,
        )
        .unwrap()
    }

    #[test]
    fn pushforward_proves_all_seven() {
        let x = space("X", 3);
        let y = space("Y", 2);
        let map: BTreeMap<String, String> = x
            .atoms()
            .iter()
            .map(|a| (a.clone(), y.label(0).to_string()))
            .collect();
        let spec = Transfunction::pushforward(&x, &y, &map).unwrap();
        let report = infer_properties(&spec).unwrap();
        for verdict in &report.verdicts {
            assert_eq!(verdict.status, Status::Proved, "axiom {}", verdict.axiom);
        }
        assert_eq!(report.verdict(Axiom::Bounded).unwrap().constant, Some(1.0));
        assert_eq!(
            report.verdict(Axiom::Continuous).unwrap().constant,
            Some(1.0)
        );
    }

    #[test]
    fn stochastic_matrix_preserves_mass_statically() {
        let x = space("X", 2);
        let spec =
            Transfunction::matrix(&x, &x, vec![vec![0.5, 0.0], vec![0.5, 1.0]]).unwrap();
        let report = infer_properties(&spec).unwrap();
        assert_eq!(
            report.verdict(Axiom::MeasurePreserving).unwrap().status,
            Status::Proved
        );
        assert_eq!(report.verdict(Axiom::Bounded).unwrap().constant, Some(1.0));
    }

    #[test]
    fn lossy_matrix_is_refuted_with_a_point_mass_witness() {
        let x = space("X", 2);
        let spec =
            Transfunction::matrix(&x, &x, vec![vec![0.5, 0.0], vec![0.5, 0.9]]).unwrap();
        let report = infer_properties(&spec).unwrap();
        let verdict = report.verdict(Axiom::MeasurePreserving).unwrap();
        assert_eq!(verdict.status, Status::RefutedWithWitness);
        match verdict.witness.as_ref().unwrap() {
            Witness::MassDefect { violation, .. } => {
                assert!((violation - 0.1).abs() < 1e-12);
            }
            other => panic!("expected a mass defect witness, got {other:?}"),
        }
        // The bound is still proved, with the max column sum.
        let bounded = report.verdict(Axiom::Bounded).unwrap();
        assert_eq!(bounded.status, Status::Proved);
        assert!((bounded.constant.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_bounded_with_the_tight_constant() {
        let x = space("X", 2);
        let y = space("Y", 2);
        let rho = Measure::from_masses(&y, vec![1.0, 1.0]).unwrap();
        let phi: BTreeMap<(String, String), f64> = [
            (("x0".to_string(), "y0".to_string()), 0.5),
            (("x0".to_string(), "y1".to_string()), 0.5),
            (("x1".to_string(), "y0".to_string()), 2.0),
        ]
        .into();
        let spec = Transfunction::kernel(&x, &phi, &rho).unwrap();
        let report = infer_properties(&spec).unwrap();
        for axiom in [
            Axiom::WeaklyAdditive,
            Axiom::StronglyAdditive,
            Axiom::Homogeneous,
            Axiom::Monotone,
            Axiom::Bounded,
            Axiom::Continuous,
        ] {
            assert_eq!(report.verdict(axiom).unwrap().status, Status::Proved);
        }
        // max_x sum_y phi(x, y) rho(y) = max(1.0, 2.0).
        assert_eq!(report.verdict(Axiom::Bounded).unwrap().constant, Some(2.0));
        assert_eq!(
            report.verdict(Axiom::MeasurePreserving).unwrap().status,
            Status::RefutedWithWitness
        );
    }

    #[test]
    fn semigroup_product_is_refuted_constructively() {
        let spec = zn_conv(3);
        let report = infer_properties(&spec).unwrap();
        assert_eq!(
            report.verdict(Axiom::Homogeneous).unwrap().status,
            Status::RefutedWithWitness
        );
        assert_eq!(
            report.verdict(Axiom::StronglyAdditive).unwrap().status,
            Status::RefutedWithWitness
        );
        assert_eq!(
            report.verdict(Axiom::WeaklyAdditive).unwrap().status,
            Status::RefutedWithWitness
        );
        assert_eq!(
            report.verdict(Axiom::Monotone).unwrap().status,
            Status::Proved
        );
        assert_eq!(
            report.verdict(Axiom::Bounded).unwrap().status,
            Status::Unknown
        );
    }

    #[test]
    fn max_with_keeps_monotonicity_and_modulus() {
        let x = space("X", 2);
        let rho = Measure::from_masses(&x, vec![1.0, 0.5]).unwrap();
        let spec = Transfunction::max_with(Transfunction::identity(&x), rho).unwrap();
        let report = infer_properties(&spec).unwrap();
        assert_eq!(
            report.verdict(Axiom::Monotone).unwrap().status,
            Status::Proved
        );
        let continuous = report.verdict(Axiom::Continuous).unwrap();
        assert_eq!(continuous.status, Status::Proved);
        assert_eq!(continuous.constant, Some(1.0));
        for axiom in [
            Axiom::WeaklyAdditive,
            Axiom::StronglyAdditive,
            Axiom::Homogeneous,
            Axiom::MeasurePreserving,
            Axiom::Bounded,
        ] {
            assert_eq!(report.verdict(axiom).unwrap().status, Status::Unknown);
        }
    }

    #[test]
    fn compose_multiplies_constants_and_intersects_proofs() {
        let x = space("X", 2);
        let double = Transfunction::matrix(&x, &x, vec![vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let triple = Transfunction::matrix(&x, &x, vec![vec![3.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let spec = Transfunction::compose(double, triple).unwrap();
        let report = infer_properties(&spec).unwrap();
        assert_eq!(report.verdict(Axiom::Bounded).unwrap().constant, Some(6.0));
        assert_eq!(
            report.verdict(Axiom::StronglyAdditive).unwrap().status,
            Status::Proved
        );
        assert_eq!(
            report.verdict(Axiom::MeasurePreserving).unwrap().status,
            Status::Unknown
        );
    }

    #[test]
    fn implications_hold_in_the_rule_table() {
        // Measure preserving implies bounded with constant exactly 1.
        let x = space("X", 3);
        let map: BTreeMap<String, String> =
            x.atoms().iter().map(|a| (a.clone(), a.clone())).collect();
        let spec = Transfunction::pushforward(&x, &x, &map).unwrap();
        let report = infer_properties(&spec).unwrap();
        assert_eq!(report.verdict(Axiom::Bounded).unwrap().constant, Some(1.0));
        // Strongly additive implies weakly additive.
        assert_eq!(
            report.verdict(Axiom::WeaklyAdditive).unwrap().status,
            Status::Proved
        );
    }
}
