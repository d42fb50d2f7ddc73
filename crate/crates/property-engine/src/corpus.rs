//! Seeded random constructor trees for calibration and reconciliation runs.
//!
//! Leaf operators are normalized to keep column masses near 1, so deep
//! compositions stay numerically tame and rounding never approaches the
//! checker tolerance on exact laws.

use std::collections::BTreeMap;

use measure_core::{Measure, Space};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use transfun_core::Transfunction;

/// Shape limits for generated trees.
#[derive(Debug, Clone, Copy)]
pub struct CorpusConfig {
    /// Largest atom count for generated spaces.
    pub max_atoms: usize,
    /// Maximum tree depth (a leaf has depth 1).
    pub max_depth: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_atoms: 5,
            max_depth: 4,
        }
    }
}

/// A fresh space with `n` atoms and an rng-derived id.
pub fn random_space(rng: &mut ChaCha8Rng, max_atoms: usize) -> Space {
    let n = rng.random_range(1..=max_atoms);
    let tag: u32 = rng.random_range(0..1_000_000);
    Space::new(format!("S{tag}"), (0..n).map(|i| format!("a{i}"))).expect("valid space")
}

/// A random constructor tree with rng-derived spaces.
pub fn random_tree(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> Transfunction {
    let domain = random_space(rng, cfg.max_atoms);
    let codomain = random_space(rng, cfg.max_atoms);
    build(rng, cfg, &domain, &codomain, cfg.max_depth)
}

fn build(
    rng: &mut ChaCha8Rng,
    cfg: &CorpusConfig,
    domain: &Space,
    codomain: &Space,
    depth: usize,
) -> Transfunction {
    if depth <= 1 {
        return leaf(rng, domain, codomain);
    }
    match rng.random_range(0..10u32) {
        0..=2 => leaf(rng, domain, codomain),
        3 => {
            let inner = build(rng, cfg, domain, codomain, depth - 1);
            let density = random_density(rng, codomain);
            Transfunction::output_multiplier(&density, inner).expect("valid density")
        }
        4 => {
            let inner = build(rng, cfg, domain, codomain, depth - 1);
            let density = random_density(rng, domain);
            Transfunction::input_multiplier(inner, &density).expect("valid density")
        }
        5 => {
            let inner = build(rng, cfg, domain, codomain, depth - 1);
            let rho = small_measure(rng, codomain);
            Transfunction::max_with(inner, rho).expect("codomain matches")
        }
        6 => {
            let inner = build(rng, cfg, domain, codomain, depth - 1);
            let keep = random_subset(rng, domain);
            Transfunction::pre_project(&keep, inner).expect("labels in domain")
        }
        7 => {
            let inner = build(rng, cfg, domain, codomain, depth - 1);
            let keep = random_subset(rng, codomain);
            Transfunction::post_project(&keep, inner).expect("labels in codomain")
        }
        8 => {
            let left = build(rng, cfg, domain, codomain, depth - 1);
            let right = build(rng, cfg, domain, codomain, depth - 1);
            let op = random_associative_op(rng, codomain);
            Transfunction::semigroup_product(left, right, &op).expect("op is closed")
        }
        _ => {
            let mid = random_space(rng, cfg.max_atoms);
            let inner = build(rng, cfg, domain, &mid, depth - 1);
            let outer = build(rng, cfg, &mid, codomain, depth - 1);
            Transfunction::compose(outer, inner).expect("spaces align")
        }
    }
}

fn leaf(rng: &mut ChaCha8Rng, domain: &Space, codomain: &Space) -> Transfunction {
    match rng.random_range(0..4u32) {
        0 => {
            let map: BTreeMap<String, String> = domain
                .atoms()
                .iter()
                .map(|x| {
                    let j = rng.random_range(0..codomain.atom_count());
                    (x.clone(), codomain.label(j).to_string())
                })
                .collect();
            Transfunction::pushforward(domain, codomain, &map).expect("total map")
        }
        1 => {
            let entries = normalized_entries(rng, codomain.atom_count(), domain.atom_count());
            Transfunction::matrix(domain, codomain, entries).expect("valid matrix")
        }
        2 => {
            let entries = normalized_entries(rng, codomain.atom_count(), domain.atom_count());
            let columns: BTreeMap<String, BTreeMap<String, f64>> = domain
                .atoms()
                .iter()
                .enumerate()
                .map(|(j, label)| {
                    let column: BTreeMap<String, f64> = codomain
                        .atoms()
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| entries[i][j] != 0.0)
                        .map(|(i, y)| (y.clone(), entries[i][j]))
                        .collect();
                    (label.clone(), column)
                })
                .collect();
            Transfunction::countable_matrix(domain, codomain, &columns, 2.0).expect("bounded")
        }
        _ => {
            let rho = small_measure(rng, codomain);
            // Normalize phi so max_x sum_y phi(x,y) rho(y) stays near 1.
            let mut phi_raw = vec![vec![0.0; codomain.atom_count()]; domain.atom_count()];
            for row in phi_raw.iter_mut() {
                for v in row.iter_mut() {
                    *v = rng.random_range(0.0..1.0);
                }
            }
            let worst = phi_raw
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(rho.masses())
                        .map(|(p, r)| p * r)
                        .sum::<f64>()
                })
                .fold(0.0, f64::max);
            let target: f64 = rng.random_range(0.5..1.2);
            let factor = if worst > 0.0 { target / worst } else { 1.0 };
            let phi: BTreeMap<(String, String), f64> = domain
                .atoms()
                .iter()
                .enumerate()
                .flat_map(|(i, x)| {
                    let row = &phi_raw[i];
                    codomain
                        .atoms()
                        .iter()
                        .enumerate()
                        .map(move |(j, y)| ((x.clone(), y.clone()), row[j] * factor))
                        .collect::<Vec<_>>()
                })
                .collect();
            Transfunction::kernel(domain, &phi, &rho).expect("valid kernel")
        }
    }
}

/// Nonnegative entries rescaled so every column sums to a value in
/// `[0.5, 1.2)`, with roughly half the columns exactly stochastic.
fn normalized_entries(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let columns: Vec<Vec<f64>> = (0..cols)
        .map(|_| {
            let raw: Vec<f64> = (0..rows).map(|_| rng.random_range(0.01..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let target = if rng.random_bool(0.5) {
                1.0
            } else {
                rng.random_range(0.5..1.2)
            };
            raw.into_iter().map(|v| v / sum * target).collect()
        })
        .collect();
    (0..rows)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

fn random_density(rng: &mut ChaCha8Rng, space: &Space) -> BTreeMap<String, f64> {
    let mut density = BTreeMap::new();
    for label in space.atoms() {
        if rng.random_bool(0.8) {
            density.insert(label.clone(), rng.random_range(0.0..1.2));
        }
    }
    density
}

fn small_measure(rng: &mut ChaCha8Rng, space: &Space) -> Measure {
    let masses = (0..space.atom_count())
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                rng.random_range(0.0..1.5)
            }
        })
        .collect();
    Measure::from_masses(space, masses).expect("valid masses")
}

fn random_subset(rng: &mut ChaCha8Rng, space: &Space) -> Vec<String> {
    space
        .atoms()
        .iter()
        .filter(|_| rng.random_bool(0.7))
        .cloned()
        .collect()
}

/// A genuinely associative operation on the atoms: addition mod n, the left
/// projection, or index maximum.
fn random_associative_op(
    rng: &mut ChaCha8Rng,
    space: &Space,
) -> BTreeMap<(String, String), String> {
    let n = space.atom_count();
    let kind = rng.random_range(0..3u32);
    let mut op = BTreeMap::new();
    for u in 0..n {
        for v in 0..n {
            let w = match kind {
                0 => (u + v) % n,
                1 => u,
                _ => u.max(v),
            };
            op.insert(
                (space.label(u).to_string(), space.label(v).to_string()),
                space.label(w).to_string(),
            );
        }
    }
    op
}
