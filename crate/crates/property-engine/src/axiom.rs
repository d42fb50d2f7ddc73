use std::fmt;

use serde::{Deserialize, Serialize};

/// The seven transfunction properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    WeaklyAdditive,
    StronglyAdditive,
    Homogeneous,
    Monotone,
    MeasurePreserving,
    Bounded,
    Continuous,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::WeaklyAdditive,
        Axiom::StronglyAdditive,
        Axiom::Homogeneous,
        Axiom::Monotone,
        Axiom::MeasurePreserving,
        Axiom::Bounded,
        Axiom::Continuous,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::WeaklyAdditive => "weakly_additive",
            Axiom::StronglyAdditive => "strongly_additive",
            Axiom::Homogeneous => "homogeneous",
            Axiom::Monotone => "monotone",
            Axiom::MeasurePreserving => "measure_preserving",
            Axiom::Bounded => "bounded",
            Axiom::Continuous => "continuous",
        }
    }

    pub fn from_name(name: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Stable index, used to derive per-axiom trial streams.
    pub(crate) fn index(self) -> usize {
        Axiom::ALL.iter().position(|a| *a == self).unwrap()
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
