//! Seeded input generators realizing the quantifiers of the property
//! definitions: arbitrary measures, mutually singular pairs, dominated pairs,
//! and total-variation convergent sequences.

use measure_core::{Measure, Space};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CheckConfig;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-trial RNG derived from `(seed, stream, trial)`. Streams
/// separate axioms so shortening a run never shifts another axiom's draws.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mixed = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ trial);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Draws each atom mass uniformly from `[0, max_mass)`, then zeroes a random
/// subset of atoms to exercise sparse supports.
pub fn random_measure(space: &Space, cfg: &CheckConfig, rng: &mut ChaCha8Rng) -> Measure {
    let masses = (0..space.atom_count())
        .map(|_| {
            let m = rng.random_range(0.0..cfg.max_mass);
            if rng.random_bool(0.5) {
                0.0
            } else {
                m
            }
        })
        .collect();
    Measure::from_masses(space, masses).expect("generated masses are valid")
}

/// Splits the atoms into two disjoint random sets and draws one measure on
/// each, so the pair is mutually singular by construction.
pub fn random_singular_pair(
    space: &Space,
    cfg: &CheckConfig,
    rng: &mut ChaCha8Rng,
) -> (Measure, Measure) {
    let n = space.atom_count();
    let mut first = vec![0.0; n];
    let mut second = vec![0.0; n];
    for i in 0..n {
        let mass = rng.random_range(0.0..cfg.max_mass);
        if rng.random_bool(0.5) {
            first[i] = mass;
        } else {
            second[i] = mass;
        }
    }
    (
        Measure::from_masses(space, first).expect("generated masses are valid"),
        Measure::from_masses(space, second).expect("generated masses are valid"),
    )
}

/// Draws `mu2`, then `mu1` with each atom mass uniform in `[0, mu2(atom)]`,
/// so `mu1 ≤ mu2` by construction.
pub fn random_dominated_pair(
    space: &Space,
    cfg: &CheckConfig,
    rng: &mut ChaCha8Rng,
) -> (Measure, Measure) {
    let upper = random_measure(space, cfg, rng);
    let lower = upper
        .masses()
        .iter()
        .map(|&m| if m == 0.0 { 0.0 } else { rng.random_range(0.0..=m) })
        .collect();
    (
        Measure::from_masses(space, lower).expect("generated masses are valid"),
        upper,
    )
}

/// Returns `seq[k] = target + 2⁻ᵏ · perturbation` for `k = 0 .. length`, a
/// sequence converging to `target` in total variation with exactly geometric
/// input distances (scaling by powers of two is exact in floating point).
pub fn random_tv_sequence(
    space: &Space,
    target: &Measure,
    cfg: &CheckConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Measure> {
    let perturbation = random_measure(space, cfg, rng);
    (0..cfg.sequence_length)
        .map(|k| {
            let scaled = perturbation
                .scale(2.0f64.powi(-(k as i32)))
                .expect("powers of two are valid scales");
            target.add(&scaled).expect("same space by construction")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> Space {
        Space::new("X", (0..n).map(|i| format!("a{i}"))).unwrap()
    }

    #[test]
    fn singular_pairs_are_singular() {
        let cfg = CheckConfig::default();
        for n in 1..=6 {
            let sp = space(n);
            for t in 0..200 {
                let mut rng = trial_rng(7, 0, t);
                let (a, b) = random_singular_pair(&sp, &cfg, &mut rng);
                assert!(a.mutually_singular(&b).unwrap());
            }
        }
    }

    #[test]
    fn dominated_pairs_are_dominated() {
        let cfg = CheckConfig::default();
        for n in 1..=6 {
            let sp = space(n);
            for t in 0..200 {
                let mut rng = trial_rng(8, 0, t);
                let (lo, hi) = random_dominated_pair(&sp, &cfg, &mut rng);
                assert!(lo.leq(&hi).unwrap());
            }
        }
    }

    #[test]
    fn tv_sequences_decay_geometrically() {
        let cfg = CheckConfig::default();
        let sp = space(4);
        for t in 0..100 {
            let mut rng = trial_rng(9, 0, t);
            let target = random_measure(&sp, &cfg, &mut rng);
            let seq = random_tv_sequence(&sp, &target, &cfg, &mut rng);
            assert_eq!(seq.len(), cfg.sequence_length as usize);
            let d0 = seq[0].tv_distance(&target).unwrap();
            let mut previous = f64::INFINITY;
            for (k, term) in seq.iter().enumerate() {
                let d = term.tv_distance(&target).unwrap();
                // Exactly geometric up to the rounding of (target + x) - target.
                let expected = d0 * 2.0f64.powi(-(k as i32));
                assert!((d - expected).abs() <= 1e-12 * (1.0 + d0));
                if d0 > 0.0 {
                    assert!(d < previous || d == 0.0);
                }
                previous = d;
            }
        }
    }

    #[test]
    fn trial_rng_is_deterministic_and_stream_separated() {
        let a: Vec<f64> = {
            let mut rng = trial_rng(1, 2, 3);
            (0..4).map(|_| rng.random_range(0.0..1.0)).collect()
        };
        let b: Vec<f64> = {
            let mut rng = trial_rng(1, 2, 3);
            (0..4).map(|_| rng.random_range(0.0..1.0)).collect()
        };
        assert_eq!(a, b);
        let c: Vec<f64> = {
            let mut rng = trial_rng(1, 4, 3);
            (0..4).map(|_| rng.random_range(0.0..1.0)).collect()
        };
        assert_ne!(a, c);
    }
}
