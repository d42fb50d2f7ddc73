use std::collections::BTreeMap;

use crate::{MeasureError, ProductSpace, Space};

/// A finite nonnegative measure on a discrete [`Space`], stored as one mass
/// per atom in atom order. Total mass is always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    space: Space,
    masses: Vec<f64>,
}

fn check_mass(label: &str, value: f64) -> Result<(), MeasureError> {
    if !value.is_finite() {
        return Err(MeasureError::NonFinite {
            context: format!("mass of atom '{label}'"),
            value,
        });
    }
    if value < 0.0 {
        return Err(MeasureError::NegativeMass {
            label: label.to_string(),
            value,
        });
    }
    Ok(())
}

impl Measure {
    /// The zero measure.
    pub fn zero(space: &Space) -> Measure {
        Measure {
            space: space.clone(),
            masses: vec![0.0; space.atom_count()],
        }
    }

    /// Builds a measure from `(label, mass)` entries; repeated labels add up.
    pub fn from_entries<I, S>(space: &Space, entries: I) -> Result<Measure, MeasureError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut masses = vec![0.0; space.atom_count()];
        for (label, mass) in entries {
            let label = label.as_ref();
            let idx = space
                .index_of(label)
                .ok_or_else(|| MeasureError::unknown_atom(label, space))?;
            check_mass(label, mass)?;
            masses[idx] += mass;
        }
        Ok(Measure {
            space: space.clone(),
            masses,
        })
    }

    /// Builds a measure from a full mass vector in atom order.
    pub fn from_masses(space: &Space, masses: Vec<f64>) -> Result<Measure, MeasureError> {
        if masses.len() != space.atom_count() {
            return Err(MeasureError::InvalidSpace {
                space: space.id().to_string(),
                reason: format!(
                    "mass vector has {} entries for {} atoms",
                    masses.len(),
                    space.atom_count()
                ),
            });
        }
        for (i, &m) in masses.iter().enumerate() {
            check_mass(space.label(i), m)?;
        }
        Ok(Measure {
            space: space.clone(),
            masses,
        })
    }

    /// Point mass at `label`.
    pub fn dirac(space: &Space, label: &str, mass: f64) -> Result<Measure, MeasureError> {
        Measure::from_entries(space, [(label, mass)])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass_at(&self, index: usize) -> f64 {
        self.masses[index]
    }

    pub fn mass_of(&self, label: &str) -> Result<f64, MeasureError> {
        let idx = self
            .space
            .index_of(label)
            .ok_or_else(|| MeasureError::unknown_atom(label, &self.space))?;
        Ok(self.masses[idx])
    }

    /// `‖μ‖`: the measure of the whole space.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.masses.iter().all(|&m| m == 0.0)
    }

    /// `μ(A)` for the set of atoms `A`. Repeated labels are counted once.
    pub fn evaluate<S: AsRef<str>>(&self, set: &[S]) -> Result<f64, MeasureError> {
        let mask = self.mask_for(set)?;
        Ok(self
            .masses
            .iter()
            .zip(&mask)
            .filter(|&(_, &keep)| keep)
            .map(|(&m, _)| m)
            .sum())
    }

    fn mask_for<S: AsRef<str>>(&self, set: &[S]) -> Result<Vec<bool>, MeasureError> {
        let mut mask = vec![false; self.space.atom_count()];
        for label in set {
            let label = label.as_ref();
            let idx = self
                .space
                .index_of(label)
                .ok_or_else(|| MeasureError::unknown_atom(label, &self.space))?;
            mask[idx] = true;
        }
        Ok(mask)
    }

    fn require_same_space(&self, other: &Measure) -> Result<(), MeasureError> {
        if self.space != other.space {
            return Err(MeasureError::mismatch(&self.space, &other.space));
        }
        Ok(())
    }

    /// `μ + ν`, atomwise.
    pub fn add(&self, other: &Measure) -> Result<Measure, MeasureError> {
        self.require_same_space(other)?;
        let masses = self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Measure {
            space: self.space.clone(),
            masses,
        })
    }

    /// `α μ` for `α ≥ 0`.
    pub fn scale(&self, alpha: f64) -> Result<Measure, MeasureError> {
        if !alpha.is_finite() {
            return Err(MeasureError::NonFinite {
                context: "scale factor".to_string(),
                value: alpha,
            });
        }
        if alpha < 0.0 {
            return Err(MeasureError::NegativeScalar { value: alpha });
        }
        Ok(Measure {
            space: self.space.clone(),
            masses: self.masses.iter().map(|m| alpha * m).collect(),
        })
    }

    /// `μ ≤ ν`: domination on every measurable set, which on atomic spaces is
    /// atomwise domination.
    pub fn leq(&self, other: &Measure) -> Result<bool, MeasureError> {
        self.require_same_space(other)?;
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .all(|(a, b)| a <= b))
    }

    /// `μ ⊥ ν`: disjoint supports.
    pub fn mutually_singular(&self, other: &Measure) -> Result<bool, MeasureError> {
        self.require_same_space(other)?;
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .all(|(&a, &b)| a == 0.0 || b == 0.0))
    }

    /// `π_S μ`: keeps the masses on `S`, zero elsewhere, so
    /// `(π_S μ)(A) = μ(A ∩ S)`.
    pub fn project<S: AsRef<str>>(&self, set: &[S]) -> Result<Measure, MeasureError> {
        let mask = self.mask_for(set)?;
        Ok(self.project_mask(&mask))
    }

    /// Projection by an atom-index mask; `mask.len()` must equal the atom count.
    pub fn project_mask(&self, mask: &[bool]) -> Measure {
        assert_eq!(mask.len(), self.space.atom_count());
        let masses = self
            .masses
            .iter()
            .zip(mask)
            .map(|(&m, &keep)| if keep { m } else { 0.0 })
            .collect();
        Measure {
            space: self.space.clone(),
            masses,
        }
    }

    /// The product measure `μ × ν` on the product space, with
    /// `(μ × ν)({(x,y)}) = μ({x}) ν({y})`.
    pub fn product(&self, other: &Measure) -> Result<(ProductSpace, Measure), MeasureError> {
        let product = ProductSpace::new(&self.space, &other.space)?;
        let mut masses = Vec::with_capacity(self.masses.len() * other.masses.len());
        for &a in &self.masses {
            for &b in &other.masses {
                masses.push(a * b);
            }
        }
        let measure = Measure {
            space: product.space().clone(),
            masses,
        };
        Ok((product, measure))
    }

    /// `g μ` for a density `g : atoms → [0, ∞)`. Labels absent from `g` count
    /// as zero; keys outside the space are rejected.
    pub fn multiply_density(&self, density: &BTreeMap<String, f64>) -> Result<Measure, MeasureError> {
        let mut weights = vec![0.0; self.space.atom_count()];
        for (label, &value) in density {
            let idx = self
                .space
                .index_of(label)
                .ok_or_else(|| MeasureError::unknown_atom(label, &self.space))?;
            if !value.is_finite() {
                return Err(MeasureError::NonFinite {
                    context: format!("density at atom '{label}'"),
                    value,
                });
            }
            if value < 0.0 {
                return Err(MeasureError::NegativeMass {
                    label: label.clone(),
                    value,
                });
            }
            weights[idx] = value;
        }
        Ok(self.multiply_weights(&weights))
    }

    /// Atomwise product with a nonnegative weight vector in atom order.
    pub fn multiply_weights(&self, weights: &[f64]) -> Measure {
        assert_eq!(weights.len(), self.space.atom_count());
        let masses = self
            .masses
            .iter()
            .zip(weights)
            .map(|(m, w)| m * w)
            .collect();
        Measure {
            space: self.space.clone(),
            masses,
        }
    }

    /// `max{μ, ν}`: the atomwise maximum, which is the lattice join — the
    /// least measure dominating both arguments.
    pub fn join(&self, other: &Measure) -> Result<Measure, MeasureError> {
        self.require_same_space(other)?;
        let masses = self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(&a, &b)| a.max(b))
            .collect();
        Ok(Measure {
            space: self.space.clone(),
            masses,
        })
    }

    /// Total-variation distance `Σ_atoms |μ({x}) − ν({x})|`.
    pub fn tv_distance(&self, other: &Measure) -> Result<f64, MeasureError> {
        self.require_same_space(other)?;
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    /// Indices of atoms with strictly positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0.0)
            .map(|(i, _)| i)
    }
}
