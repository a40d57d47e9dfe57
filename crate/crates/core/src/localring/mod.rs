//! Coefficient rings for the oracles and the double-structure checks:
//! small finite fields, truncated power series over them, and matrices.

mod field;
mod matrix;
mod trunc;

pub use field::{FiniteField, Fp, Fq2};
pub use matrix::{resultant, RingMatrix};
pub use trunc::{TruncSeries, Valuation, EXACT};
