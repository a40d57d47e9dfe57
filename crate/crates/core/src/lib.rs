//! Exact computation of both sides of the linear arithmetic fundamental
//! lemma for `GL_4`, together with brute-force lattice and matrix counting
//! oracles over truncated power series rings.

pub mod algebra;
pub mod error;
pub mod doublestruct;
pub mod exactalg;
pub mod geomside;
pub mod latoracle;
pub mod localring;
pub mod orbside;

pub use error::{Error, Result};
