//! Finite nonnegative measures on discrete measurable spaces.
//!
//! A [`Space`] is an ordered set of labeled atoms whose sigma-algebra is the
//! power set, so every finite measure is a nonnegative mass vector indexed by
//! atoms. [`Measure`] provides the cone operations (addition, nonnegative
//! scaling), the pointwise partial order and lattice join, projections onto
//! atom subsets, products on a [`ProductSpace`], atomwise density
//! multiplication, and the total-variation distance used as the convergence
//! mode everywhere in this workspace.
//!
//! All values are immutable after construction and all operations are pure,
//! so they can be shared freely across threads.

mod doc;
mod error;
mod measure;
mod space;

pub use doc::{MeasureDoc, SpaceDoc};
pub use error::MeasureError;
pub use measure::Measure;
pub use space::{ProductSpace, Space};
