use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Measure, MeasureError, Space};

/// JSON form of a space: `{"id": string, "atoms": [string]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub id: String,
    pub atoms: Vec<String>,
}

impl SpaceDoc {
    pub fn from_space(space: &Space) -> SpaceDoc {
        SpaceDoc {
            id: space.id().to_string(),
            atoms: space.atoms().to_vec(),
        }
    }

    pub fn to_space(&self) -> Result<Space, MeasureError> {
        Space::new(&self.id, self.atoms.iter().cloned())
    }
}

/// JSON form of a measure: `{"space": string, "masses": {label: number}}`.
/// The space is referenced by id; labels missing from `masses` mean zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub space: String,
    pub masses: BTreeMap<String, f64>,
}

impl MeasureDoc {
    /// Canonical form: only nonzero masses are written, in label order.
    pub fn from_measure(measure: &Measure) -> MeasureDoc {
        let masses = measure
            .space()
            .atoms()
            .iter()
            .zip(measure.masses())
            .filter(|&(_, &m)| m != 0.0)
            .map(|(label, &m)| (label.clone(), m))
            .collect();
        MeasureDoc {
            space: measure.space().id().to_string(),
            masses,
        }
    }

    /// Resolves the document against a concrete space. The document's space
    /// id must match, every label must be an atom, and masses must be finite
    /// and nonnegative.
    pub fn bind(&self, space: &Space) -> Result<Measure, MeasureError> {
        if self.space != space.id() {
            return Err(MeasureError::SpaceMismatch {
                left: self.space.clone(),
                right: space.id().to_string(),
            });
        }
        Measure::from_entries(space, self.masses.iter().map(|(l, &m)| (l.clone(), m)))
    }
}
