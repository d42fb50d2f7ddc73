use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::MeasureError;

/// A discrete measurable space: an ordered list of distinct atom labels.
///
/// The sigma-algebra is implicitly the power set of the atoms, so a subset of
/// labels names every measurable set. The atom order is fixed at construction
/// and gives each label a stable index. Cloning is cheap (shared inner data).
///
/// Labels may not be empty or contain a comma: the documented JSON formats key
/// atom pairs as `"u,v"`, which is only unambiguous under that restriction.
#[derive(Clone)]
pub struct Space {
    inner: Arc<SpaceInner>,
}

struct SpaceInner {
    id: String,
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Space {
    pub fn new<I, S>(id: impl Into<String>, atoms: I) -> Result<Space, MeasureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = id.into();
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(MeasureError::InvalidSpace {
                space: id,
                reason: "a space needs at least one atom".to_string(),
            });
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, label) in atoms.iter().enumerate() {
            if label.is_empty() {
                return Err(MeasureError::InvalidSpace {
                    space: id,
                    reason: "atom labels may not be empty".to_string(),
                });
            }
            if label.contains(',') {
                return Err(MeasureError::InvalidSpace {
                    space: id,
                    reason: format!("atom label '{label}' contains a comma"),
                });
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(MeasureError::InvalidSpace {
                    space: id,
                    reason: format!("duplicate atom label '{label}'"),
                });
            }
        }
        Ok(Space {
            inner: Arc::new(SpaceInner { id, atoms, index }),
        })
    }

    /// Diagnostic name of the space; not part of equality.
    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn atoms(&self) -> &[String] {
        &self.inner.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.inner.atoms.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.index.get(label).copied()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.inner.atoms[index]
    }

    pub fn contains(&self, label: &str) -> bool {
        self.inner.index.contains_key(label)
    }
}

/// Two spaces are equal when they list the same atoms in the same order.
/// The `id` is diagnostic only.
impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.atoms == other.inner.atoms
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("id", &self.inner.id)
            .field("atoms", &self.inner.atoms)
            .finish()
    }
}

/// The product of two discrete spaces, with pair atoms in row-major order:
/// the pair `(left[i], right[j])` sits at index `i * |right| + j` and is
/// labeled `"left,right"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    left: Space,
    right: Space,
    space: Space,
}

impl ProductSpace {
    pub fn new(left: &Space, right: &Space) -> Result<ProductSpace, MeasureError> {
        let mut atoms = Vec::with_capacity(left.atom_count() * right.atom_count());
        for l in left.atoms() {
            for r in right.atoms() {
                atoms.push(format!("{l},{r}"));
            }
        }
        let id = format!("{}x{}", left.id(), right.id());
        // Pair labels contain exactly one comma, so Space::new would reject
        // them; build the inner space directly. Distinctness follows from the
        // factors' distinct comma-free labels.
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, label) in atoms.iter().enumerate() {
            index.insert(label.clone(), i);
        }
        let space = Space {
            inner: Arc::new(SpaceInner { id, atoms, index }),
        };
        Ok(ProductSpace {
            left: left.clone(),
            right: right.clone(),
            space,
        })
    }

    pub fn left(&self) -> &Space {
        &self.left
    }

    pub fn right(&self) -> &Space {
        &self.right
    }

    /// The product viewed as an ordinary space of pair atoms.
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn pair_index(&self, left_index: usize, right_index: usize) -> usize {
        left_index * self.right.atom_count() + right_index
    }

    /// Inverse of `pair_index`.
    pub fn decode(&self, index: usize) -> (usize, usize) {
        let n = self.right.atom_count();
        (index / n, index % n)
    }
}
