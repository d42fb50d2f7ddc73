//! Randomized counterexample search and the static/dynamic reconciliation.

use measure_core::{Measure, MeasureDoc};
use transfun_core::Transfunction;

use crate::generators::{
    random_dominated_pair, random_measure, random_singular_pair, random_tv_sequence, trial_rng,
};
use crate::infer::{analyze, ensure_checkable, Analysis, Outcome};
use crate::report::{PropertyReport, Status, Verdict, Witness};
use crate::{spec_digest, Axiom, CheckConfig, EngineError};

/// A mass-ratio growth by this factor across a scale sweep refutes
/// boundedness.
const DIVERGENCE_FACTOR: f64 = 1e4;
/// Scale sweeps cover six decades in each direction.
const DIVERGENCE_DECADES: i32 = 6;
/// Base measures probed per direction when no static bound exists.
const DIVERGENCE_PROBES: usize = 3;
/// Draw attempts when hunting for nonzero probe bases.
const DIVERGENCE_PROBE_ATTEMPTS: u64 = 32;
/// Headroom for the geometric-decay continuity check: the last output
/// distance may exceed the ideal `first · 2^-(K-1)` by this factor.
const DECAY_SLACK: f64 = 16.0;

/// Runs the randomized checker for one axiom: `cfg.trials` seeded trials with
/// the generator matching the axiom's quantifier, returning a replayable
/// refutation on the first violation above `cfg.tolerance`, else
/// `PassedTrials`. For `bounded`, the verdict constant is the empirical
/// supremum of `‖Φμ‖/‖μ‖`.
pub fn check_axiom(
    spec: &Transfunction,
    axiom: Axiom,
    cfg: &CheckConfig,
) -> Result<Verdict, EngineError> {
    cfg.validate()?;
    ensure_checkable(spec)?;
    let analysis = analyze(spec)?;
    check_dynamic(spec, axiom, cfg, &analysis)
}

/// Checks the listed axioms and merges each dynamic verdict with the static
/// rule table: static proofs win (a trial violation against one raises
/// [`EngineError::InternalInconsistency`]), static refutations keep their
/// verified witness, and `Unknown` defers to the trials.
pub fn check_axioms(
    spec: &Transfunction,
    axioms: &[Axiom],
    cfg: &CheckConfig,
) -> Result<PropertyReport, EngineError> {
    cfg.validate()?;
    ensure_checkable(spec)?;
    let analysis = analyze(spec)?;
    let mut verdicts = Vec::with_capacity(axioms.len());
    for &axiom in axioms {
        let dynamic = check_dynamic(spec, axiom, cfg, &analysis)?;
        verdicts.push(merge(axiom, analysis.outcome(axiom), dynamic)?);
    }
    Ok(PropertyReport {
        spec_digest: spec_digest(spec),
        config: Some(*cfg),
        verdicts,
    })
}

/// [`check_axioms`] over all seven axioms.
pub fn check_all(spec: &Transfunction, cfg: &CheckConfig) -> Result<PropertyReport, EngineError> {
    check_axioms(spec, &Axiom::ALL, cfg)
}

fn merge(axiom: Axiom, statik: &Outcome, dynamic: Verdict) -> Result<Verdict, EngineError> {
    match statik {
        Outcome::Proved { constant } => {
            if dynamic.status == Status::RefutedWithWitness {
                return Err(EngineError::InternalInconsistency {
                    axiom,
                    violation: dynamic.witness.map_or(f64::NAN, |w| w.violation()),
                });
            }
            Ok(Verdict {
                axiom,
                status: Status::Proved,
                constant: *constant,
                witness: None,
            })
        }
        Outcome::Refuted { witness } => Ok(Verdict {
            axiom,
            status: Status::RefutedWithWitness,
            constant: None,
            witness: Some(witness.clone()),
        }),
        Outcome::Unknown => Ok(dynamic),
    }
}

fn passed(axiom: Axiom, constant: Option<f64>) -> Verdict {
    Verdict {
        axiom,
        status: Status::PassedTrials,
        constant,
        witness: None,
    }
}

fn refuted(axiom: Axiom, witness: Witness) -> Verdict {
    Verdict {
        axiom,
        status: Status::RefutedWithWitness,
        constant: None,
        witness: Some(witness),
    }
}

fn check_dynamic(
    spec: &Transfunction,
    axiom: Axiom,
    cfg: &CheckConfig,
    analysis: &Analysis,
) -> Result<Verdict, EngineError> {
    let stream = axiom.index() as u64;
    match axiom {
        Axiom::WeaklyAdditive | Axiom::StronglyAdditive => {
            let singular = axiom == Axiom::WeaklyAdditive;
            for trial in 0..cfg.trials as u64 {
                let mut rng = trial_rng(cfg.seed, stream, trial);
                let (mu1, mu2) = if singular {
                    random_singular_pair(spec.domain(), cfg, &mut rng)
                } else {
                    (
                        random_measure(spec.domain(), cfg, &mut rng),
                        random_measure(spec.domain(), cfg, &mut rng),
                    )
                };
                let lhs = spec.apply(&mu1.add(&mu2)?)?;
                let rhs = spec.apply(&mu1)?.add(&spec.apply(&mu2)?)?;
                let violation = lhs.tv_distance(&rhs)?;
                if violation > cfg.tolerance {
                    return Ok(refuted(
                        axiom,
                        Witness::Additivity {
                            mu1: MeasureDoc::from_measure(&mu1),
                            mu2: MeasureDoc::from_measure(&mu2),
                            lhs: MeasureDoc::from_measure(&lhs),
                            rhs: MeasureDoc::from_measure(&rhs),
                            violation,
                        },
                    ));
                }
            }
            Ok(passed(axiom, None))
        }
        Axiom::Homogeneous => {
            for trial in 0..cfg.trials as u64 {
                let mut rng = trial_rng(cfg.seed, stream, trial);
                let mu = random_measure(spec.domain(), cfg, &mut rng);
                let alpha: f64 = rand::Rng::random_range(&mut rng, 0.0..4.0);
                let lhs = spec.apply(&mu.scale(alpha)?)?;
                let rhs = spec.apply(&mu)?.scale(alpha)?;
                let violation = lhs.tv_distance(&rhs)?;
                if violation > cfg.tolerance {
                    return Ok(refuted(
                        axiom,
                        Witness::Homogeneity {
                            alpha,
                            mu: MeasureDoc::from_measure(&mu),
                            lhs: MeasureDoc::from_measure(&lhs),
                            rhs: MeasureDoc::from_measure(&rhs),
                            violation,
                        },
                    ));
                }
            }
            Ok(passed(axiom, None))
        }
        Axiom::Monotone => {
            for trial in 0..cfg.trials as u64 {
                let mut rng = trial_rng(cfg.seed, stream, trial);
                let (mu1, mu2) = random_dominated_pair(spec.domain(), cfg, &mut rng);
                let out1 = spec.apply(&mu1)?;
                let out2 = spec.apply(&mu2)?;
                let violation = out1
                    .masses()
                    .iter()
                    .zip(out2.masses())
                    .map(|(a, b)| a - b)
                    .fold(0.0, f64::max);
                if violation > cfg.tolerance {
                    return Ok(refuted(
                        axiom,
                        Witness::Monotonicity {
                            mu1: MeasureDoc::from_measure(&mu1),
                            mu2: MeasureDoc::from_measure(&mu2),
                            out1: MeasureDoc::from_measure(&out1),
                            out2: MeasureDoc::from_measure(&out2),
                            violation,
                        },
                    ));
                }
            }
            Ok(passed(axiom, None))
        }
        Axiom::MeasurePreserving => {
            // Point masses first: for matrix-like specs the defect of column
            // j is exactly the column-sum deviation on a unit point mass.
            let diracs = dirac_sweep(spec)?;
            let randoms = (0..cfg.trials as u64).map(|trial| {
                let mut rng = trial_rng(cfg.seed, stream, trial);
                random_measure(spec.domain(), cfg, &mut rng)
            });
            for mu in diracs.into_iter().chain(randoms) {
                let out = spec.apply(&mu)?;
                let violation = (out.total_mass() - mu.total_mass()).abs();
                if violation > cfg.tolerance {
                    return Ok(refuted(
                        axiom,
                        Witness::MassDefect {
                            mu: MeasureDoc::from_measure(&mu),
                            input_mass: mu.total_mass(),
                            output_mass: out.total_mass(),
                            violation,
                        },
                    ));
                }
            }
            Ok(passed(axiom, None))
        }
        Axiom::Bounded => check_bounded(spec, cfg, analysis),
        Axiom::Continuous => check_continuous(spec, cfg, analysis),
    }
}

fn dirac_sweep(spec: &Transfunction) -> Result<Vec<Measure>, EngineError> {
    spec.domain()
        .atoms()
        .iter()
        .map(|atom| Ok(Measure::dirac(spec.domain(), atom, 1.0)?))
        .collect()
}

fn mass_ratio(spec: &Transfunction, mu: &Measure) -> Result<f64, EngineError> {
    Ok(spec.apply(mu)?.total_mass() / mu.total_mass())
}

fn check_bounded(
    spec: &Transfunction,
    cfg: &CheckConfig,
    analysis: &Analysis,
) -> Result<Verdict, EngineError> {
    let axiom = Axiom::Bounded;
    let stream = axiom.index() as u64;
    let static_bound = analysis.bound_constant();
    let mut empirical: f64 = 0.0;

    let diracs = dirac_sweep(spec)?;
    let randoms = (0..cfg.trials as u64).map(|trial| {
        let mut rng = trial_rng(cfg.seed, stream, trial);
        random_measure(spec.domain(), cfg, &mut rng)
    });
    for mu in diracs.into_iter().chain(randoms) {
        if mu.total_mass() <= cfg.tolerance {
            continue;
        }
        let ratio = mass_ratio(spec, &mu)?;
        empirical = empirical.max(ratio);
        if let Some(bound) = static_bound {
            // Rounding slack: a proved bound can only be beaten by real mass.
            let violation = ratio - bound;
            if violation > cfg.tolerance * (1.0 + bound) {
                return Ok(refuted(
                    axiom,
                    Witness::BoundExceeded {
                        mu: MeasureDoc::from_measure(&mu),
                        ratio,
                        bound,
                        violation,
                    },
                ));
            }
        }
    }

    if static_bound.is_none() {
        // No finite bound is promised; sweep the mass scale in both
        // directions and refute on a monotone ratio blow-up, the signature of
        // `‖Φμ‖/‖μ‖ → ∞` along shrinking or growing inputs.
        let mut probes = Vec::with_capacity(DIVERGENCE_PROBES);
        for attempt in 0..DIVERGENCE_PROBE_ATTEMPTS {
            if probes.len() == DIVERGENCE_PROBES {
                break;
            }
            let mut rng = trial_rng(cfg.seed, stream, cfg.trials as u64 + attempt);
            let base = random_measure(spec.domain(), cfg, &mut rng);
            if base.total_mass() > cfg.tolerance {
                probes.push(base);
            }
        }
        for base in probes {
            for direction in [-1i32, 1i32] {
                let scales: Vec<f64> = (0..=DIVERGENCE_DECADES)
                    .map(|d| 10.0f64.powi(direction * d))
                    .collect();
                let mut ratios = Vec::with_capacity(scales.len());
                for &s in &scales {
                    let mu = base.scale(s)?;
                    ratios.push(mass_ratio(spec, &mu)?);
                    empirical = empirical.max(*ratios.last().unwrap());
                }
                let monotone_growth = ratios.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
                if monotone_growth && ratios[0] > 0.0 {
                    let growth = ratios[ratios.len() - 1] / ratios[0];
                    if growth >= DIVERGENCE_FACTOR {
                        let first = base.scale(scales[0])?;
                        let last = base.scale(scales[scales.len() - 1])?;
                        return Ok(refuted(
                            axiom,
                            Witness::RatioDivergence {
                                mu_first: MeasureDoc::from_measure(&first),
                                mu_last: MeasureDoc::from_measure(&last),
                                ratio_first: ratios[0],
                                ratio_last: ratios[ratios.len() - 1],
                                violation: growth,
                            },
                        ));
                    }
                }
            }
        }
    }

    Ok(passed(axiom, Some(empirical)))
}

fn check_continuous(
    spec: &Transfunction,
    cfg: &CheckConfig,
    analysis: &Analysis,
) -> Result<Verdict, EngineError> {
    let axiom = Axiom::Continuous;
    let stream = axiom.index() as u64;
    let modulus = analysis.modulus();
    for trial in 0..cfg.trials as u64 {
        let mut rng = trial_rng(cfg.seed, stream, trial);
        let target = random_measure(spec.domain(), cfg, &mut rng);
        let sequence = random_tv_sequence(spec.domain(), &target, cfg, &mut rng);
        let out_target = spec.apply(&target)?;
        let mut first_distance = 0.0;
        let mut last_distance = 0.0;
        for (k, term) in sequence.iter().enumerate() {
            let input_distance = term.tv_distance(&target)?;
            let output_distance = spec.apply(term)?.tv_distance(&out_target)?;
            if let Some(modulus) = modulus {
                let violation = output_distance - modulus * input_distance;
                if violation > cfg.tolerance * (1.0 + modulus) {
                    return Ok(refuted(
                        axiom,
                        Witness::ContinuityTerm {
                            target: MeasureDoc::from_measure(&target),
                            term: MeasureDoc::from_measure(term),
                            input_distance,
                            output_distance,
                            modulus,
                            violation,
                        },
                    ));
                }
            }
            if k == 0 {
                first_distance = output_distance;
            }
            last_distance = output_distance;
        }
        if modulus.is_none() {
            // Without a modulus, assert the limit: output distances must
            // decay along the geometric input sequence, up to slack and an
            // absolute floor of 10x the tolerance.
            let steps = cfg.sequence_length - 1;
            let allowed = (cfg.tolerance * 10.0)
                .max(first_distance * 2.0f64.powi(-(steps as i32)) * DECAY_SLACK);
            if last_distance > allowed {
                let violation = last_distance - allowed;
                return Ok(refuted(
                    axiom,
                    Witness::ContinuityDecay {
                        target: MeasureDoc::from_measure(&target),
                        first_term: MeasureDoc::from_measure(&sequence[0]),
                        last_term: MeasureDoc::from_measure(
                            sequence.last().expect("sequence is nonempty"),
                        ),
                        first_distance,
                        last_distance,
                        allowed,
                        decay_steps: steps,
                        violation,
                    },
                ));
            }
        }
    }
    Ok(passed(axiom, modulus))
}

/// Empirical supremum of `‖Φμ‖/‖μ‖` over a unit point mass at every domain
/// atom plus `cfg.trials` random measures of mass above the tolerance. For
/// linear specs the true bound is attained at a point mass.
pub fn estimate_bound(spec: &Transfunction, cfg: &CheckConfig) -> Result<f64, EngineError> {
    cfg.validate()?;
    ensure_checkable(spec)?;
    let stream = Axiom::Bounded.index() as u64;
    let mut best: f64 = 0.0;
    for mu in dirac_sweep(spec)? {
        best = best.max(mass_ratio(spec, &mu)?);
    }
    for trial in 0..cfg.trials as u64 {
        let mut rng = trial_rng(cfg.seed, stream, trial);
        let mu = random_measure(spec.domain(), cfg, &mut rng);
        if mu.total_mass() <= cfg.tolerance {
            continue;
        }
        best = best.max(mass_ratio(spec, &mu)?);
    }
    Ok(best)
}

/// Re-evaluates a stored witness against the spec and returns the reproduced
/// violation. Refutations are sound when this exceeds the check tolerance.
pub fn replay_violation(spec: &Transfunction, witness: &Witness) -> Result<f64, EngineError> {
    let domain = spec.domain();
    let bind =
        |doc: &MeasureDoc| -> Result<Measure, EngineError> { Ok(doc.bind(domain)?) };
    match witness {
        Witness::Additivity { mu1, mu2, .. } => {
            let mu1 = bind(mu1)?;
            let mu2 = bind(mu2)?;
            let lhs = spec.apply(&mu1.add(&mu2)?)?;
            let rhs = spec.apply(&mu1)?.add(&spec.apply(&mu2)?)?;
            Ok(lhs.tv_distance(&rhs)?)
        }
        Witness::Homogeneity { alpha, mu, .. } => {
            let mu = bind(mu)?;
            let lhs = spec.apply(&mu.scale(*alpha)?)?;
            let rhs = spec.apply(&mu)?.scale(*alpha)?;
            Ok(lhs.tv_distance(&rhs)?)
        }
        Witness::Monotonicity { mu1, mu2, .. } => {
            let out1 = spec.apply(&bind(mu1)?)?;
            let out2 = spec.apply(&bind(mu2)?)?;
            Ok(out1
                .masses()
                .iter()
                .zip(out2.masses())
                .map(|(a, b)| a - b)
                .fold(0.0, f64::max))
        }
        Witness::MassDefect { mu, .. } => {
            let mu = bind(mu)?;
            let out = spec.apply(&mu)?;
            Ok((out.total_mass() - mu.total_mass()).abs())
        }
        Witness::BoundExceeded { mu, bound, .. } => {
            let mu = bind(mu)?;
            Ok(mass_ratio(spec, &mu)? - bound)
        }
        Witness::RatioDivergence {
            mu_first, mu_last, ..
        } => {
            let first = mass_ratio(spec, &bind(mu_first)?)?;
            let last = mass_ratio(spec, &bind(mu_last)?)?;
            Ok(last / first)
        }
        Witness::ContinuityTerm {
            target,
            term,
            modulus,
            ..
        } => {
            let target = bind(target)?;
            let term = bind(term)?;
            let input_distance = term.tv_distance(&target)?;
            let output_distance = spec.apply(&term)?.tv_distance(&spec.apply(&target)?)?;
            Ok(output_distance - modulus * input_distance)
        }
        Witness::ContinuityDecay {
            target,
            last_term,
            allowed,
            ..
        } => {
            let target = bind(target)?;
            let last = bind(last_term)?;
            let distance = spec.apply(&last)?.tv_distance(&spec.apply(&target)?)?;
            Ok(distance - allowed)
        }
    }
}
