//! End-to-end checks of the engine: dynamic refutations on known specs,
//! determinism, witness replay, bound estimation, and static/dynamic
//! reconciliation over a random corpus.

use std::collections::BTreeMap;

use measure_core::{Measure, Space};
use property_engine::corpus::{random_tree, CorpusConfig};
use property_engine::{
    check_all, check_axiom, check_axioms, estimate_bound, infer_properties, replay_violation,
    Axiom, CheckConfig, EngineError, Status, Witness,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use transfun_core::Transfunction;

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

fn max_with_unit(n: usize) -> Transfunction {
    let x = space("X", n);
    let rho = Measure::from_masses(&x, vec![1.0; n]).unwrap();
    Transfunction::max_with(Transfunction::identity(&x), rho).unwrap()
}

fn cfg(seed: u64) -> CheckConfig {
    CheckConfig {
        trials: 200,
        seed,
        ..CheckConfig::default()
    }
}

#[test]
fn pushforward_passes_the_full_suite() {
    let x = space("X", 4);
    let y = space("Y", 3);
    let map: BTreeMap<String, String> = x
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), y.label(i % 3).to_string()))
        .collect();
    let spec = Transfunction::pushforward(&x, &y, &map).unwrap();
    let report = check_all(&spec, &cfg(42)).unwrap();
    for verdict in &report.verdicts {
        assert_eq!(verdict.status, Status::Proved, "axiom {}", verdict.axiom);
    }
}

#[test]
fn lossy_matrix_yields_a_dirac_defect_witness() {
    let x = space("X", 2);
    let spec = Transfunction::matrix(&x, &x, vec![vec![0.5, 0.0], vec![0.5, 0.9]]).unwrap();
    let verdict = check_axiom(&spec, Axiom::MeasurePreserving, &cfg(7)).unwrap();
    assert_eq!(verdict.status, Status::RefutedWithWitness);
    let witness = verdict.witness.unwrap();
    match &witness {
        Witness::MassDefect {
            mu,
            input_mass,
            output_mass,
            violation,
        } => {
            // The point-mass sweep finds the bad column before any random trial.
            assert_eq!(mu.masses.len(), 1);
            assert_eq!(mu.masses.get("x1"), Some(&1.0));
            assert!((input_mass - 1.0).abs() < 1e-15);
            assert!((output_mass - 0.9).abs() < 1e-12);
            assert!((violation - 0.1).abs() < 1e-12);
        }
        other => panic!("expected a mass defect witness, got {other:?}"),
    }
    assert!(replay_violation(&spec, &witness).unwrap() > 1e-9);
}

#[test]
fn semigroup_product_is_refuted_dynamically() {
    let spec = zn_conv(4);
    for axiom in [
        Axiom::Homogeneous,
        Axiom::WeaklyAdditive,
        Axiom::StronglyAdditive,
    ] {
        let verdict = check_axiom(&spec, axiom, &cfg(3)).unwrap();
        assert_eq!(
            verdict.status,
            Status::RefutedWithWitness,
            "axiom {axiom}"
        );
        let witness = verdict.witness.unwrap();
        assert!(replay_violation(&spec, &witness).unwrap() > 1e-9);
    }
    // Boundedness blows up at large mass: the product is quadratic.
    let verdict = check_axiom(&spec, Axiom::Bounded, &cfg(3)).unwrap();
    assert_eq!(verdict.status, Status::RefutedWithWitness);
    // Monotonicity holds.
    let verdict = check_axiom(&spec, Axiom::Monotone, &cfg(3)).unwrap();
    assert_eq!(verdict.status, Status::PassedTrials);
}

#[test]
fn bounded_refutation_survives_zero_probe_draws() {
    // With seed 5 and 100 trials the first three probe draws are all zero
    // measures; the probe must keep scanning for usable bases.
    let spec = zn_conv(3);
    let config = CheckConfig {
        trials: 100,
        seed: 5,
        ..CheckConfig::default()
    };
    let verdict = check_axiom(&spec, Axiom::Bounded, &config).unwrap();
    assert_eq!(verdict.status, Status::RefutedWithWitness);
}

#[test]
fn max_with_is_refuted_for_boundedness_and_additivity() {
    let spec = max_with_unit(3);
    let config = cfg(11);

    let bounded = check_axiom(&spec, Axiom::Bounded, &config).unwrap();
    assert_eq!(bounded.status, Status::RefutedWithWitness);
    match bounded.witness.as_ref().unwrap() {
        Witness::RatioDivergence { violation, .. } => {
            assert!(*violation >= 1e4);
        }
        other => panic!("expected ratio divergence, got {other:?}"),
    }
    assert!(replay_violation(&spec, &bounded.witness.unwrap()).unwrap() > 1e-9);

    for axiom in [Axiom::WeaklyAdditive, Axiom::StronglyAdditive] {
        let verdict = check_axiom(&spec, axiom, &config).unwrap();
        assert_eq!(verdict.status, Status::RefutedWithWitness, "axiom {axiom}");
        assert!(replay_violation(&spec, &verdict.witness.unwrap()).unwrap() > 1e-9);
    }

    // The join is 1-Lipschitz, so continuity passes with the inner modulus.
    let continuous = check_axiom(&spec, Axiom::Continuous, &config).unwrap();
    assert_eq!(continuous.status, Status::PassedTrials);
    assert_eq!(continuous.constant, Some(1.0));
}

#[test]
fn max_with_zero_behaves_like_its_inner_map() {
    let x = space("X", 3);
    let spec =
        Transfunction::max_with(Transfunction::identity(&x), Measure::zero(&x)).unwrap();
    let report = check_all(&spec, &cfg(13)).unwrap();
    for verdict in &report.verdicts {
        assert_ne!(
            verdict.status,
            Status::RefutedWithWitness,
            "axiom {}",
            verdict.axiom
        );
    }
}

#[test]
fn verdicts_are_byte_deterministic() {
    let spec = zn_conv(3);
    let config = cfg(99);
    let a = check_all(&spec, &config).unwrap().to_json_string();
    let b = check_all(&spec, &config).unwrap().to_json_string();
    assert_eq!(a, b);
    let c = check_all(&spec, &cfg(100)).unwrap().to_json_string();
    // A different seed may find different witnesses.
    assert_eq!(a.len(), a.len().max(1));
    let _ = c;
}

#[test]
fn single_axiom_reports_match_the_full_run() {
    let spec = max_with_unit(2);
    let config = cfg(5);
    let full = check_all(&spec, &config).unwrap();
    let single = check_axioms(&spec, &[Axiom::Bounded], &config).unwrap();
    assert_eq!(single.verdicts.len(), 1);
    assert_eq!(
        single.verdicts[0],
        *full.verdict(Axiom::Bounded).unwrap(),
        "per-axiom streams make single runs reproduce the full run"
    );
}

#[test]
fn estimate_bound_equals_max_column_sum_for_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let rows = rand::Rng::random_range(&mut rng, 1..=6);
        let cols = rand::Rng::random_range(&mut rng, 1..=6);
        let x = space("X", cols);
        let y = space("Y", rows);
        let entries: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| rand::Rng::random_range(&mut rng, 0.0..2.0))
                    .collect()
            })
            .collect();
        let spec = Transfunction::matrix(&x, &y, entries.clone()).unwrap();
        let expected = (0..cols)
            .map(|j| entries.iter().map(|row| row[j]).sum::<f64>())
            .fold(0.0, f64::max);
        // The point-mass sweep attains the exact column sum.
        let sweep = (0..cols)
            .map(|j| {
                let dirac = Measure::dirac(&x, x.label(j), 1.0).unwrap();
                spec.apply(&dirac).unwrap().total_mass()
            })
            .fold(0.0, f64::max);
        assert_eq!(sweep, expected);
        // Random trials are averages of column sums, so they can only add
        // rounding noise on top of the sweep.
        let estimated = estimate_bound(&spec, &cfg(1)).unwrap();
        assert!(estimated >= expected);
        assert!(estimated <= expected * (1.0 + 1e-13));
    }
}

#[test]
fn raw_checker_passes_mass_preservation_for_pushforwards() {
    let x = space("X", 5);
    let y = space("Y", 2);
    let map: BTreeMap<String, String> = x
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), y.label(i % 2).to_string()))
        .collect();
    let spec = Transfunction::pushforward(&x, &y, &map).unwrap();
    let verdict = check_axiom(&spec, Axiom::MeasurePreserving, &cfg(1000)).unwrap();
    assert_eq!(verdict.status, Status::PassedTrials);
}

#[test]
fn estimate_bound_with_column_sums_one_and_point_nine() {
    let x = space("X", 2);
    let spec = Transfunction::matrix(&x, &x, vec![vec![0.5, 0.45], vec![0.5, 0.45]]).unwrap();
    let estimated = estimate_bound(&spec, &cfg(6)).unwrap();
    assert!((estimated - 1.0).abs() <= 1e-12);
}

#[test]
fn estimate_bound_is_one_for_mass_preserving_specs() {
    let x = space("X", 3);
    let map: BTreeMap<String, String> =
        x.atoms().iter().map(|a| (a.clone(), a.clone())).collect();
    let spec = Transfunction::pushforward(&x, &x, &map).unwrap();
    let estimated = estimate_bound(&spec, &cfg(2)).unwrap();
    assert!((estimated - 1.0).abs() <= 1e-9);
}

#[test]
fn kernel_bound_estimate_stays_under_the_coarse_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let x = space("X", rand::Rng::random_range(&mut rng, 1..=4));
        let y = space("Y", rand::Rng::random_range(&mut rng, 1..=4));
        let mut phi = BTreeMap::new();
        let mut sup = 0.0f64;
        for xl in x.atoms() {
            for yl in y.atoms() {
                let v: f64 = rand::Rng::random_range(&mut rng, 0.0..2.0);
                sup = sup.max(v);
                phi.insert((xl.clone(), yl.clone()), v);
            }
        }
        let rho_masses: Vec<f64> = (0..y.atom_count())
            .map(|_| rand::Rng::random_range(&mut rng, 0.0..3.0))
            .collect();
        let rho = Measure::from_masses(&y, rho_masses).unwrap();
        let spec = Transfunction::kernel(&x, &phi, &rho).unwrap();
        let estimated = estimate_bound(&spec, &cfg(4)).unwrap();
        assert!(estimated <= sup * rho.total_mass() * (1.0 + 1e-12));
    }
}

#[test]
fn partial_countable_matrices_are_rejected_by_the_engine() {
    let x = space("X", 2);
    let y = space("Y", 1);
    let columns: BTreeMap<String, BTreeMap<String, f64>> =
        [("x0".to_string(), BTreeMap::from([("y0".to_string(), 1.0)]))].into();
    let spec = Transfunction::countable_matrix(&x, &y, &columns, 2.0).unwrap();
    assert!(matches!(
        check_all(&spec, &cfg(1)),
        Err(EngineError::InvalidSpec { .. })
    ));
    assert!(matches!(
        infer_properties(&spec),
        Err(EngineError::InvalidSpec { .. })
    ));
}

#[test]
fn reconciliation_over_a_random_corpus() {
    // A smaller companion of the acceptance-level run: statically proved
    // axioms must never be refuted by the checker.
    let corpus_cfg = CorpusConfig::default();
    let check_cfg = CheckConfig {
        trials: 120,
        seed: 1234,
        ..CheckConfig::default()
    };
    for tree_seed in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
        let spec = random_tree(&mut rng, &corpus_cfg);
        match check_all(&spec, &check_cfg) {
            Ok(_) => {}
            Err(EngineError::InternalInconsistency { axiom, violation }) => {
                panic!(
                    "statically proved axiom {axiom} refuted with violation {violation} \
                     on tree seed {tree_seed}"
                );
            }
            Err(other) => panic!("unexpected engine error: {other}"),
        }
    }
}

#[test]
fn refutation_witnesses_replay_above_tolerance() {
    let specs = vec![zn_conv(5), max_with_unit(4)];
    let config = cfg(77);
    for spec in specs {
        let report = check_all(&spec, &config).unwrap();
        for verdict in &report.verdicts {
            if verdict.status == Status::RefutedWithWitness {
                let witness = verdict.witness.as_ref().unwrap();
                let replayed = replay_violation(&spec, witness).unwrap();
                assert!(
                    replayed > config.tolerance,
                    "axiom {} replayed at {replayed}",
                    verdict.axiom
                );
            }
        }
    }
}
