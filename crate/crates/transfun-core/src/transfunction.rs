use std::collections::BTreeMap;

use measure_core::{Measure, MeasureError, Space};

use crate::TransfunError;

/// A transfunction between two discrete spaces, represented as an immutable
/// constructor tree. Every node records its domain and codomain space, so the
/// tree is self-describing and validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfunction {
    domain: Space,
    codomain: Space,
    pub(crate) node: Node,
}

/// Read-only view of a constructor-tree node. Values are only built through
/// the validated [`Transfunction`] constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// `Φ_f(μ)(S) = μ(f⁻¹(S))` for a total function `f : X → Y`,
    /// stored as domain index → codomain index.
    Pushforward { map: Vec<usize> },
    /// `Φ(μ) = A μ` for a nonnegative matrix, rows indexed by codomain atoms
    /// and columns by domain atoms.
    Matrix { entries: Vec<Vec<f64>> },
    /// One finite-support column measure per domain atom, with every column's
    /// total mass strictly below `bound`. Columns may be missing; applying to
    /// a measure whose support hits a missing column is an error.
    CountableMatrix {
        columns: Vec<Option<Vec<f64>>>,
        bound: f64,
    },
    /// `Φ(μ)(B) = Σ_{x} Σ_{y∈B} φ(x,y) μ({x}) ρ({y})`, the discrete form of
    /// integrating φ against μ × ρ. `phi[x][y]` is zero-extended.
    Kernel { phi: Vec<Vec<f64>>, rho: Measure },
    /// Atomwise multiplication of the output by a codomain density.
    OutputMultiplier {
        weights: Vec<f64>,
        inner: Box<Transfunction>,
    },
    /// `(Φg)(μ) = Φ(gμ)`: atomwise multiplication of the input by a domain
    /// density.
    InputMultiplier {
        weights: Vec<f64>,
        inner: Box<Transfunction>,
    },
    /// `μ ↦ max{Φ(μ), ρ}` with the lattice join on the codomain.
    MaxWith {
        rho: Measure,
        inner: Box<Transfunction>,
    },
    /// `Φ ∘ π_A`: project the input onto a domain subset first.
    PreProject {
        mask: Vec<bool>,
        inner: Box<Transfunction>,
    },
    /// `π_B ∘ Φ`: project the output onto a codomain subset.
    PostProject {
        mask: Vec<bool>,
        inner: Box<Transfunction>,
    },
    /// `(Φ ⊙ Ψ)(μ)(B) = (Φ(μ) × Ψ(μ))(⊙⁻¹(B))` for a total closed binary
    /// operation on the codomain, stored as `op[u][v]` → codomain index.
    SemigroupProduct {
        left: Box<Transfunction>,
        right: Box<Transfunction>,
        op: Vec<Vec<usize>>,
    },
    /// `μ ↦ outer(inner(μ))`.
    Compose {
        outer: Box<Transfunction>,
        inner: Box<Transfunction>,
    },
}

fn check_entry(context: &str, value: f64) -> Result<(), TransfunError> {
    if !value.is_finite() {
        return Err(TransfunError::invalid(format!(
            "non-finite value {value} for {context}"
        )));
    }
    if value < 0.0 {
        return Err(TransfunError::invalid(format!(
            "negative value {value} for {context}"
        )));
    }
    Ok(())
}

fn resolve_density(
    space: &Space,
    role: &str,
    density: &BTreeMap<String, f64>,
) -> Result<Vec<f64>, TransfunError> {
    let mut weights = vec![0.0; space.atom_count()];
    for (label, &value) in density {
        let idx = space.index_of(label).ok_or(MeasureError::UnknownAtom {
            label: label.clone(),
            space: space.id().to_string(),
        })?;
        check_entry(&format!("{role} density at '{label}'"), value)?;
        weights[idx] = value;
    }
    Ok(weights)
}

fn resolve_mask<S: AsRef<str>>(space: &Space, set: &[S]) -> Result<Vec<bool>, TransfunError> {
    let mut mask = vec![false; space.atom_count()];
    for label in set {
        let label = label.as_ref();
        let idx = space.index_of(label).ok_or(MeasureError::UnknownAtom {
            label: label.to_string(),
            space: space.id().to_string(),
        })?;
        mask[idx] = true;
    }
    Ok(mask)
}

impl Transfunction {
    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    /// The root node of the constructor tree.
    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Kind tag of the root node, matching the JSON `kind` field.
    pub fn kind(&self) -> &'static str {
        match &self.node {
            Node::Pushforward { .. } => "pushforward",
            Node::Matrix { .. } => "matrix",
            Node::CountableMatrix { .. } => "countable_matrix",
            Node::Kernel { .. } => "kernel",
            Node::OutputMultiplier { .. } => "output_multiplier",
            Node::InputMultiplier { .. } => "input_multiplier",
            Node::MaxWith { .. } => "max_with",
            Node::PreProject { .. } => "pre_project",
            Node::PostProject { .. } => "post_project",
            Node::SemigroupProduct { .. } => "semigroup_product",
            Node::Compose { .. } => "compose",
        }
    }

    /// Child nodes in path order (compose: outer then inner).
    pub fn children(&self) -> Vec<&Transfunction> {
        match &self.node {
            Node::Pushforward { .. }
            | Node::Matrix { .. }
            | Node::CountableMatrix { .. }
            | Node::Kernel { .. } => Vec::new(),
            Node::OutputMultiplier { inner, .. }
            | Node::InputMultiplier { inner, .. }
            | Node::MaxWith { inner, .. }
            | Node::PreProject { inner, .. }
            | Node::PostProject { inner, .. } => vec![inner],
            Node::SemigroupProduct { left, right, .. } => vec![left, right],
            Node::Compose { outer, inner } => vec![outer, inner],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    /// True when the tree contains no join or semigroup-product node, so the
    /// transfunction is linear on the cone and has a matrix representation.
    pub fn is_linear(&self) -> bool {
        !matches!(
            self.node,
            Node::MaxWith { .. } | Node::SemigroupProduct { .. }
        ) && self.children().iter().all(|c| c.is_linear())
    }

    /// Domain atoms that have a column in every countable-matrix node they
    /// reach; `None` for some atom means applying a measure supported there
    /// would fail with `MissingColumn`. Returns true when all columns exist.
    pub fn has_total_columns(&self) -> bool {
        let own = match &self.node {
            Node::CountableMatrix { columns, .. } => columns.iter().all(|c| c.is_some()),
            _ => true,
        };
        own && self.children().iter().all(|c| c.has_total_columns())
    }

    // ----- constructors ------------------------------------------------

    /// Pushforward along a total function given as domain label → codomain
    /// label.
    pub fn pushforward(
        domain: &Space,
        codomain: &Space,
        map: &BTreeMap<String, String>,
    ) -> Result<Transfunction, TransfunError> {
        let mut resolved = vec![usize::MAX; domain.atom_count()];
        for (from, to) in map {
            let i = domain.index_of(from).ok_or(MeasureError::UnknownAtom {
                label: from.clone(),
                space: domain.id().to_string(),
            })?;
            let j = codomain.index_of(to).ok_or(MeasureError::UnknownAtom {
                label: to.clone(),
                space: codomain.id().to_string(),
            })?;
            resolved[i] = j;
        }
        if let Some(i) = resolved.iter().position(|&j| j == usize::MAX) {
            return Err(TransfunError::invalid(format!(
                "pushforward map has no image for domain atom '{}'",
                domain.label(i)
            )));
        }
        Ok(Transfunction {
            domain: domain.clone(),
            codomain: codomain.clone(),
            node: Node::Pushforward { map: resolved },
        })
    }

    /// The identity transfunction on a space.
    pub fn identity(space: &Space) -> Transfunction {
        Transfunction {
            domain: space.clone(),
            codomain: space.clone(),
            node: Node::Pushforward {
                map: (0..space.atom_count()).collect(),
            },
        }
    }

    /// `μ ↦ A μ` for a row-major nonnegative matrix with
    /// `|codomain| × |domain|` entries.
    pub fn matrix(
        domain: &Space,
        codomain: &Space,
        entries: Vec<Vec<f64>>,
    ) -> Result<Transfunction, TransfunError> {
        let expected_rows = codomain.atom_count();
        let expected_cols = domain.atom_count();
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows != expected_rows || entries.iter().any(|r| r.len() != expected_cols) {
            return Err(TransfunError::DimensionMismatch {
                rows,
                cols,
                expected_rows,
                expected_cols,
            });
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                check_entry(&format!("matrix entry ({i},{j})"), v)?;
            }
        }
        Ok(Transfunction {
            domain: domain.clone(),
            codomain: codomain.clone(),
            node: Node::Matrix { entries },
        })
    }

    /// Column-table transfunction: one finite-support column measure per
    /// domain atom, every column mass strictly below `bound`. Atoms missing
    /// from `columns` have no column.
    pub fn countable_matrix(
        domain: &Space,
        codomain: &Space,
        columns: &BTreeMap<String, BTreeMap<String, f64>>,
        bound: f64,
    ) -> Result<Transfunction, TransfunError> {
        if !bound.is_finite() || bound <= 0.0 {
            return Err(TransfunError::invalid(format!(
                "declared column bound must be positive and finite, got {bound}"
            )));
        }
        let mut resolved: Vec<Option<Vec<f64>>> = vec![None; domain.atom_count()];
        for (label, column) in columns {
            let idx = domain.index_of(label).ok_or(MeasureError::UnknownAtom {
                label: label.clone(),
                space: domain.id().to_string(),
            })?;
            let column =
                Measure::from_entries(codomain, column.iter().map(|(l, &m)| (l.clone(), m)))?;
            let mass = column.total_mass();
            if mass >= bound {
                return Err(TransfunError::BoundViolated {
                    label: label.clone(),
                    mass,
                    bound,
                });
            }
            resolved[idx] = Some(column.masses().to_vec());
        }
        Ok(Transfunction {
            domain: domain.clone(),
            codomain: codomain.clone(),
            node: Node::CountableMatrix {
                columns: resolved,
                bound,
            },
        })
    }

    /// Kernel transfunction against the reference measure `rho`; the codomain
    /// is `rho`'s space. Pairs missing from `phi` count as zero.
    pub fn kernel(
        domain: &Space,
        phi: &BTreeMap<(String, String), f64>,
        rho: &Measure,
    ) -> Result<Transfunction, TransfunError> {
        let codomain = rho.space().clone();
        let mut table = vec![vec![0.0; codomain.atom_count()]; domain.atom_count()];
        for ((x, y), &value) in phi {
            let i = domain.index_of(x).ok_or(MeasureError::UnknownAtom {
                label: x.clone(),
                space: domain.id().to_string(),
            })?;
            let j = codomain.index_of(y).ok_or(MeasureError::UnknownAtom {
                label: y.clone(),
                space: codomain.id().to_string(),
            })?;
            check_entry(&format!("kernel value at ('{x}','{y}')"), value)?;
            table[i][j] = value;
        }
        Ok(Transfunction {
            domain: domain.clone(),
            codomain,
            node: Node::Kernel {
                phi: table,
                rho: rho.clone(),
            },
        })
    }

    /// Multiplies the output of `inner` by a codomain density.
    pub fn output_multiplier(
        density: &BTreeMap<String, f64>,
        inner: Transfunction,
    ) -> Result<Transfunction, TransfunError> {
        let weights = resolve_density(&inner.codomain, "output", density)?;
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: inner.codomain.clone(),
            node: Node::OutputMultiplier {
                weights,
                inner: Box::new(inner),
            },
        })
    }

    /// Multiplies the input by a domain density before applying `inner`.
    pub fn input_multiplier(
        inner: Transfunction,
        density: &BTreeMap<String, f64>,
    ) -> Result<Transfunction, TransfunError> {
        let weights = resolve_density(&inner.domain, "input", density)?;
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: inner.codomain.clone(),
            node: Node::InputMultiplier {
                weights,
                inner: Box::new(inner),
            },
        })
    }

    /// Joins the output of `inner` with a fixed codomain measure.
    pub fn max_with(inner: Transfunction, rho: Measure) -> Result<Transfunction, TransfunError> {
        if rho.space() != &inner.codomain {
            return Err(MeasureError::SpaceMismatch {
                left: rho.space().id().to_string(),
                right: inner.codomain.id().to_string(),
            }
            .into());
        }
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: inner.codomain.clone(),
            node: Node::MaxWith {
                rho,
                inner: Box::new(inner),
            },
        })
    }

    /// `Φ ∘ π_A` for a domain subset `A`.
    pub fn pre_project<S: AsRef<str>>(
        keep: &[S],
        inner: Transfunction,
    ) -> Result<Transfunction, TransfunError> {
        let mask = resolve_mask(&inner.domain, keep)?;
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: inner.codomain.clone(),
            node: Node::PreProject {
                mask,
                inner: Box::new(inner),
            },
        })
    }

    /// `π_B ∘ Φ` for a codomain subset `B`.
    pub fn post_project<S: AsRef<str>>(
        keep: &[S],
        inner: Transfunction,
    ) -> Result<Transfunction, TransfunError> {
        let mask = resolve_mask(&inner.codomain, keep)?;
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: inner.codomain.clone(),
            node: Node::PostProject {
                mask,
                inner: Box::new(inner),
            },
        })
    }

    /// Semigroup product of two transfunctions sharing domain and codomain,
    /// for a total binary operation `op` closed on the codomain atoms.
    pub fn semigroup_product(
        left: Transfunction,
        right: Transfunction,
        op: &BTreeMap<(String, String), String>,
    ) -> Result<Transfunction, TransfunError> {
        if left.domain != right.domain {
            return Err(MeasureError::SpaceMismatch {
                left: left.domain.id().to_string(),
                right: right.domain.id().to_string(),
            }
            .into());
        }
        if left.codomain != right.codomain {
            return Err(MeasureError::SpaceMismatch {
                left: left.codomain.id().to_string(),
                right: right.codomain.id().to_string(),
            }
            .into());
        }
        let codomain = &left.codomain;
        let n = codomain.atom_count();
        let mut table = vec![vec![usize::MAX; n]; n];
        for ((u, v), w) in op {
            let ui = codomain.index_of(u).ok_or(MeasureError::UnknownAtom {
                label: u.clone(),
                space: codomain.id().to_string(),
            })?;
            let vi = codomain.index_of(v).ok_or(MeasureError::UnknownAtom {
                label: v.clone(),
                space: codomain.id().to_string(),
            })?;
            let wi = codomain.index_of(w).ok_or(MeasureError::UnknownAtom {
                label: w.clone(),
                space: codomain.id().to_string(),
            })?;
            table[ui][vi] = wi;
        }
        for (u, row) in table.iter().enumerate() {
            if let Some(v) = row.iter().position(|&w| w == usize::MAX) {
                return Err(TransfunError::invalid(format!(
                    "operation table has no entry for pair ('{}','{}')",
                    codomain.label(u),
                    codomain.label(v)
                )));
            }
        }
        Ok(Transfunction {
            domain: left.domain.clone(),
            codomain: codomain.clone(),
            node: Node::SemigroupProduct {
                left: Box::new(left),
                right: Box::new(right),
                op: table,
            },
        })
    }

    /// `μ ↦ outer(inner(μ))`; the inner codomain must equal the outer domain.
    pub fn compose(
        outer: Transfunction,
        inner: Transfunction,
    ) -> Result<Transfunction, TransfunError> {
        if inner.codomain != outer.domain {
            return Err(MeasureError::SpaceMismatch {
                left: inner.codomain.id().to_string(),
                right: outer.domain.id().to_string(),
            }
            .into());
        }
        Ok(Transfunction {
            domain: inner.domain.clone(),
            codomain: outer.codomain.clone(),
            node: Node::Compose {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        })
    }

    // ----- evaluation ---------------------------------------------------

    /// Applies the transfunction to a measure on its domain space.
    pub fn apply(&self, mu: &Measure) -> Result<Measure, TransfunError> {
        if mu.space() != &self.domain {
            return Err(MeasureError::SpaceMismatch {
                left: mu.space().id().to_string(),
                right: self.domain.id().to_string(),
            }
            .into());
        }
        match &self.node {
            Node::Pushforward { map } => {
                let mut out = vec![0.0; self.codomain.atom_count()];
                for (x, &y) in map.iter().enumerate() {
                    out[y] += mu.mass_at(x);
                }
                Ok(Measure::from_masses(&self.codomain, out)?)
            }
            Node::Matrix { entries } => {
                let mut out = vec![0.0; self.codomain.atom_count()];
                for (i, row) in entries.iter().enumerate() {
                    out[i] = row
                        .iter()
                        .zip(mu.masses())
                        .map(|(a, m)| a * m)
                        .sum();
                }
                Ok(Measure::from_masses(&self.codomain, out)?)
            }
            Node::CountableMatrix { columns, .. } => {
                let mut out = vec![0.0; self.codomain.atom_count()];
                for x in mu.support() {
                    let column = columns[x].as_ref().ok_or(TransfunError::MissingColumn {
                        label: self.domain.label(x).to_string(),
                    })?;
                    let weight = mu.mass_at(x);
                    for (y, &c) in column.iter().enumerate() {
                        out[y] += weight * c;
                    }
                }
                Ok(Measure::from_masses(&self.codomain, out)?)
            }
            Node::Kernel { phi, rho } => {
                let mut out = vec![0.0; self.codomain.atom_count()];
                for (y, slot) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (x, row) in phi.iter().enumerate() {
                        acc += row[y] * mu.mass_at(x);
                    }
                    *slot = rho.mass_at(y) * acc;
                }
                Ok(Measure::from_masses(&self.codomain, out)?)
            }
            Node::OutputMultiplier { weights, inner } => {
                Ok(inner.apply(mu)?.multiply_weights(weights))
            }
            Node::InputMultiplier { weights, inner } => inner.apply(&mu.multiply_weights(weights)),
            Node::MaxWith { rho, inner } => Ok(inner.apply(mu)?.join(rho)?),
            Node::PreProject { mask, inner } => inner.apply(&mu.project_mask(mask)),
            Node::PostProject { mask, inner } => Ok(inner.apply(mu)?.project_mask(mask)),
            Node::SemigroupProduct { left, right, op } => {
                let l = left.apply(mu)?;
                let r = right.apply(mu)?;
                let mut out = vec![0.0; self.codomain.atom_count()];
                for (u, row) in op.iter().enumerate() {
                    let lu = l.mass_at(u);
                    if lu == 0.0 {
                        continue;
                    }
                    for (v, &w) in row.iter().enumerate() {
                        out[w] += lu * r.mass_at(v);
                    }
                }
                Ok(Measure::from_masses(&self.codomain, out)?)
            }
            Node::Compose { outer, inner } => outer.apply(&inner.apply(mu)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(id: &str, labels: &[&str]) -> Space {
        Space::new(id, labels.iter().copied()).unwrap()
    }

    fn m(s: &Space, masses: &[f64]) -> Measure {
        Measure::from_masses(s, masses.to_vec()).unwrap()
    }

    fn string_map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn density(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|&(a, v)| (a.to_string(), v)).collect()
    }

    fn zn_space(n: usize) -> Space {
        Space::new(format!("Z{n}"), (0..n).map(|i| format!("z{i}"))).unwrap()
    }

    fn zn_add(n: usize) -> BTreeMap<(String, String), String> {
        let mut op = BTreeMap::new();
        for u in 0..n {
            for v in 0..n {
                op.insert(
                    (format!("z{u}"), format!("z{v}")),
                    format!("z{}", (u + v) % n),
                );
            }
        }
        op
    }

    #[test]
    fn pushforward_collapses_preimages() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1", "y2"]);
        let f = Transfunction::pushforward(&x, &y, &string_map(&[("x1", "y1"), ("x2", "y1")]))
            .unwrap();
        assert_eq!(f.apply(&m(&x, &[2.0, 3.0])).unwrap(), m(&y, &[5.0, 0.0]));
    }

    #[test]
    fn pushforward_identity_and_permutation() {
        let x = space("X", &["x1", "x2"]);
        let id = Transfunction::identity(&x);
        let mu = m(&x, &[2.0, 3.0]);
        assert_eq!(id.apply(&mu).unwrap(), mu);

        let swap =
            Transfunction::pushforward(&x, &x, &string_map(&[("x1", "x2"), ("x2", "x1")]))
                .unwrap();
        assert_eq!(swap.apply(&mu).unwrap(), m(&x, &[3.0, 2.0]));
    }

    #[test]
    fn pushforward_requires_total_map() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1"]);
        let err =
            Transfunction::pushforward(&x, &y, &string_map(&[("x1", "y1")])).unwrap_err();
        assert!(matches!(err, TransfunError::InvalidSpec { .. }));
    }

    #[test]
    fn matrix_examples() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1", "y2"]);

        let id = Transfunction::matrix(&x, &x, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mu = m(&x, &[2.0, 4.0]);
        assert_eq!(id.apply(&mu).unwrap(), mu);

        let a = Transfunction::matrix(&x, &y, vec![vec![0.5, 0.0], vec![0.5, 1.0]]).unwrap();
        let out = a.apply(&mu).unwrap();
        assert_eq!(out, m(&y, &[1.0, 5.0]));
        assert_eq!(out.total_mass(), 6.0);

        let double = Transfunction::matrix(&x, &y, vec![vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(
            double.apply(&m(&x, &[1.0, 1.0])).unwrap(),
            m(&y, &[2.0, 2.0])
        );
    }

    #[test]
    fn matrix_dimension_mismatch() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1"]);
        let err = Transfunction::matrix(&x, &y, vec![vec![1.0], vec![0.0]]).unwrap_err();
        assert!(matches!(err, TransfunError::DimensionMismatch { .. }));
    }

    #[test]
    fn countable_matrix_weighted_columns() {
        let x = space("X", &["x1", "x2", "x3"]);
        let y = space("Y", &["y1", "y2"]);
        let dirac_col = |_: usize| density(&[("y1", 1.0)]);
        let columns: BTreeMap<String, BTreeMap<String, f64>> = (0..3)
            .map(|i| (format!("x{}", i + 1), dirac_col(i)))
            .collect();
        let t = Transfunction::countable_matrix(&x, &y, &columns, 2.0).unwrap();

        let mu = m(&x, &[1.0, 2.5, 0.5]);
        let out = t.apply(&mu).unwrap();
        assert_eq!(out, m(&y, &[4.0, 0.0]));
        assert_eq!(out.total_mass(), mu.total_mass());

        // Dirac input picks out a single column.
        let d = Measure::dirac(&x, "x3", 2.0).unwrap();
        assert_eq!(t.apply(&d).unwrap(), m(&y, &[2.0, 0.0]));
    }

    #[test]
    fn countable_matrix_bound_and_missing_column() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1"]);
        let columns: BTreeMap<String, BTreeMap<String, f64>> =
            [("x1".to_string(), density(&[("y1", 3.0)]))].into();
        assert!(matches!(
            Transfunction::countable_matrix(&x, &y, &columns, 3.0),
            Err(TransfunError::BoundViolated { .. })
        ));

        let t = Transfunction::countable_matrix(&x, &y, &columns, 4.0).unwrap();
        assert!(!t.has_total_columns());
        // Mass on the missing column is an error; zero mass there is fine.
        let err = t.apply(&m(&x, &[1.0, 1.0])).unwrap_err();
        assert!(matches!(err, TransfunError::MissingColumn { label } if label == "x2"));
        assert_eq!(t.apply(&m(&x, &[2.0, 0.0])).unwrap(), m(&y, &[6.0]));
    }

    #[test]
    fn kernel_examples() {
        let x = space("X", &["x1"]);
        let y = space("Y", &["y1", "y2"]);
        let rho = m(&y, &[1.0, 1.0]);

        let zero = Transfunction::kernel(&x, &BTreeMap::new(), &rho).unwrap();
        assert!(zero.apply(&m(&x, &[5.0])).unwrap().is_zero());

        let phi: BTreeMap<(String, String), f64> = [
            (("x1".to_string(), "y1".to_string()), 0.3),
            (("x1".to_string(), "y2".to_string()), 0.7),
        ]
        .into();
        let t = Transfunction::kernel(&x, &phi, &rho).unwrap();
        let out = t.apply(&Measure::dirac(&x, "x1", 2.0).unwrap()).unwrap();
        assert!(out.tv_distance(&m(&y, &[0.6, 1.4])).unwrap() < 1e-15);
    }

    #[test]
    fn output_multiplier_examples() {
        let x = space("X", &["x1", "x2"]);
        let id = Transfunction::identity(&x);
        let mu = m(&x, &[3.0, 4.0]);

        let ones = Transfunction::output_multiplier(&density(&[("x1", 1.0), ("x2", 1.0)]), id.clone())
            .unwrap();
        assert_eq!(ones.apply(&mu).unwrap(), mu);

        let zeros = Transfunction::output_multiplier(&BTreeMap::new(), id.clone()).unwrap();
        assert!(zeros.apply(&mu).unwrap().is_zero());

        let f = Transfunction::output_multiplier(&density(&[("x1", 2.0), ("x2", 1.0)]), id).unwrap();
        assert_eq!(f.apply(&mu).unwrap(), m(&x, &[6.0, 4.0]));
    }

    #[test]
    fn input_multiplier_examples() {
        let x = space("X", &["x1", "x2"]);
        let id = Transfunction::identity(&x);
        let mu = m(&x, &[5.0, 7.0]);

        let g = Transfunction::input_multiplier(id.clone(), &density(&[("x2", 1.0)])).unwrap();
        assert_eq!(g.apply(&mu).unwrap(), m(&x, &[0.0, 7.0]));

        // Indicator density equals pre-projection.
        let indicator = Transfunction::input_multiplier(id.clone(), &density(&[("x1", 1.0)]))
            .unwrap();
        let projected = Transfunction::pre_project(&["x1"], id).unwrap();
        assert_eq!(
            indicator.apply(&mu).unwrap(),
            projected.apply(&mu).unwrap()
        );
    }

    #[test]
    fn max_with_examples() {
        let x = space("X", &["x1", "x2"]);
        let id = Transfunction::identity(&x);

        let with_zero = Transfunction::max_with(id.clone(), Measure::zero(&x)).unwrap();
        let mu = m(&x, &[1.0, 3.0]);
        assert_eq!(with_zero.apply(&mu).unwrap(), mu);

        let rho = m(&x, &[2.0, 2.0]);
        let t = Transfunction::max_with(id, rho.clone()).unwrap();
        assert_eq!(t.apply(&mu).unwrap(), m(&x, &[2.0, 3.0]));
        assert_eq!(t.apply(&Measure::zero(&x)).unwrap(), rho);
    }

    #[test]
    fn projection_examples() {
        let x = space("X", &["a", "b", "c"]);
        let id = Transfunction::identity(&x);
        let mu = m(&x, &[2.0, 3.0, 4.0]);

        let full = Transfunction::pre_project(&["a", "b", "c"], id.clone()).unwrap();
        assert_eq!(full.apply(&mu).unwrap(), mu);

        let none = Transfunction::post_project::<&str>(&[], id.clone()).unwrap();
        assert!(none.apply(&mu).unwrap().is_zero());

        let some = Transfunction::pre_project(&["a", "c"], id).unwrap();
        assert_eq!(some.apply(&mu).unwrap(), m(&x, &[2.0, 0.0, 4.0]));
    }

    #[test]
    fn semigroup_product_examples() {
        let z3 = zn_space(3);
        let conv = Transfunction::semigroup_product(
            Transfunction::identity(&z3),
            Transfunction::identity(&z3),
            &zn_add(3),
        )
        .unwrap();

        let dirac = Measure::dirac(&z3, "z0", 1.0).unwrap();
        assert_eq!(conv.apply(&dirac).unwrap(), dirac);

        let mu = m(&z3, &[1.0, 1.0, 0.0]);
        assert_eq!(conv.apply(&mu).unwrap(), m(&z3, &[1.0, 2.0, 1.0]));

        assert!(conv.apply(&Measure::zero(&z3)).unwrap().is_zero());
    }

    #[test]
    fn semigroup_product_requires_total_op() {
        let z2 = zn_space(2);
        let mut op = zn_add(2);
        op.remove(&("z0".to_string(), "z1".to_string()));
        let err = Transfunction::semigroup_product(
            Transfunction::identity(&z2),
            Transfunction::identity(&z2),
            &op,
        )
        .unwrap_err();
        assert!(matches!(err, TransfunError::InvalidSpec { .. }));
    }

    #[test]
    fn compose_checks_spaces() {
        let x = space("X", &["x1"]);
        let y = space("Y", &["y1", "y2"]);
        let f = Transfunction::pushforward(&x, &y, &string_map(&[("x1", "y1")])).unwrap();
        let g = Transfunction::identity(&x);
        // outer domain Y != inner codomain X
        assert!(Transfunction::compose(f.clone(), f.clone()).is_err());
        let ok = Transfunction::compose(f, g).unwrap();
        assert_eq!(ok.domain(), &x);
        assert_eq!(ok.codomain(), &y);
    }

    #[test]
    fn apply_rejects_wrong_space() {
        let x = space("X", &["x1"]);
        let y = space("Y", &["y1", "y2"]);
        let id = Transfunction::identity(&x);
        let err = id.apply(&Measure::zero(&y)).unwrap_err();
        assert!(matches!(
            err,
            TransfunError::Measure(MeasureError::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn linear_nodes_send_zero_to_zero() {
        let x = space("X", &["x1", "x2"]);
        let y = space("Y", &["y1"]);
        let zero = Measure::zero(&x);
        let nodes = [
            Transfunction::pushforward(&x, &y, &string_map(&[("x1", "y1"), ("x2", "y1")]))
                .unwrap(),
            Transfunction::matrix(&x, &y, vec![vec![0.7, 1.3]]).unwrap(),
            Transfunction::kernel(
                &x,
                &[(("x1".to_string(), "y1".to_string()), 2.0)].into(),
                &m(&y, &[1.5]),
            )
            .unwrap(),
        ];
        for node in nodes {
            assert!(node.apply(&zero).unwrap().is_zero());
        }
    }

    #[test]
    fn node_count_counts_the_tree() {
        let x = space("X", &["x1"]);
        let id = Transfunction::identity(&x);
        let t = Transfunction::compose(
            Transfunction::max_with(id.clone(), Measure::zero(&x)).unwrap(),
            id,
        )
        .unwrap();
        assert_eq!(t.node_count(), 4);
        assert!(!t.is_linear());
    }
}
