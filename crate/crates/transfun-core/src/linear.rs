use measure_core::Measure;

use crate::{TransfunError, Transfunction};

/// Matrix representation of a transfunction, or the marker that none exists.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearForm {
    /// Row-major `|codomain| × |domain|` matrix whose column `j` is the image
    /// of the unit point mass at domain atom `j`.
    Matrix(Vec<Vec<f64>>),
    /// The tree contains a join or semigroup-product node.
    NotLinear,
}

impl Transfunction {
    /// Computes the matrix representation by applying the transfunction to a
    /// unit point mass at every domain atom. Trees containing a `max_with` or
    /// `semigroup_product` node return [`LinearForm::NotLinear`].
    pub fn to_matrix(&self) -> Result<LinearForm, TransfunError> {
        if !self.is_linear() {
            return Ok(LinearForm::NotLinear);
        }
        let rows = self.codomain().atom_count();
        let cols = self.domain().atom_count();
        let mut entries = vec![vec![0.0; cols]; rows];
        for (j, label) in self.domain().atoms().iter().enumerate() {
            let dirac = Measure::dirac(self.domain(), label, 1.0)?;
            let image = self.apply(&dirac)?;
            for (i, &mass) in image.masses().iter().enumerate() {
                entries[i][j] = mass;
            }
        }
        Ok(LinearForm::Matrix(entries))
    }
}

/// Decides whether a nonnegative matrix is the pushforward of a function:
/// every entry must be exactly 0 or 1 and every column must contain exactly
/// one nonzero. Returns the function table as column index → row index.
pub fn is_function_matrix(entries: &[Vec<f64>]) -> Option<Vec<usize>> {
    let rows = entries.len();
    let cols = entries.first()?.len();
    if cols == 0 || entries.iter().any(|r| r.len() != cols) {
        return None;
    }
    let mut table = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut image = None;
        for (i, row) in entries.iter().enumerate().take(rows) {
            let v = row[j];
            if v == 0.0 {
                continue;
            }
            if v != 1.0 || image.is_some() {
                return None;
            }
            image = Some(i);
        }
        table.push(image?);
    }
    Some(table)
}
