//! Transfunctions: maps between spaces of finite measures on discrete spaces.
//!
//! A [`Transfunction`] is an immutable constructor tree. Leaves are the four
//! primitive constructions — pushforward along a function, a nonnegative
//! matrix, a column-table ("countable matrix") with a declared column-mass
//! bound, and a product kernel against a reference measure. Interior nodes
//! wrap an inner transfunction with output/input density multipliers, a join
//! against a fixed measure, domain/codomain projections, a semigroup product
//! of two transfunctions, or plain composition.
//!
//! [`Transfunction::apply`] evaluates a tree on a measure. Trees built only
//! from linear nodes admit a matrix representation via
//! [`Transfunction::to_matrix`], and [`is_function_matrix`] decides whether a
//! matrix is the pushforward of an ordinary function.

mod doc;
mod error;
mod linear;
mod transfunction;

pub use doc::{parse_spec_str, parse_spec_value, spec_to_string, spec_to_value, SpecDocError};
pub use error::TransfunError;
pub use linear::{is_function_matrix, LinearForm};
pub use transfunction::{Node, Transfunction};
