//! Exact rational functions in `q`, rational functions in an interpolation
//! variable `Z` over them, and polynomials in `T`.

mod qratfun;
mod tpoly;
mod zpoly;
mod zratfun;

pub use qratfun::QRatFun;
pub use tpoly::{dq_statistic, TPoly};
pub use zratfun::ZRatFun;
