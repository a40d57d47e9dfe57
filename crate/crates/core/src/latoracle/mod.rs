//! Ground-truth counting over truncated local fields.

mod commutant;
mod counting;
mod hermite;
mod lattices;

pub use commutant::{joint_commutant, Commutant};
pub use counting::{
    class_stat_formula, class_stat_tail, count_class_valuation_stat, count_det_valuations,
    det_volume_formula, irreducible_quadratic, VolumeTable,
};
pub use hermite::Hnf;
pub use lattices::{ClassStats, LatticeChecks, LatticeOracle, LatticeParams, LatticeReport, StableLattice};

use crate::error::{Error, Result};
use crate::exactalg::{QRatFun, TPoly};
use crate::localring::{Fp, Fq2};

/// Runs the lattice oracle over `F_q` for prime `q`.
pub fn lattice_report(q: u64, v: usize, window: usize, prec: usize) -> Result<LatticeReport> {
    match q {
        2 => LatticeOracle::<Fp<2>>::new(v, window, prec)?.run(),
        3 => LatticeOracle::<Fp<3>>::new(v, window, prec)?.run(),
        5 => LatticeOracle::<Fp<5>>::new(v, window, prec)?.run(),
        7 => LatticeOracle::<Fp<7>>::new(v, window, prec)?.run(),
        _ => Err(Error::InvalidParameter(format!("lattice oracle supports q in {{2, 3, 5, 7}}, got {q}"))),
    }
}

/// Default window and precision for a given `v`. Stable lattices of the
/// matched pair reach depth `(3v - 1) / 2`, so this is the smallest window
/// that passes the overflow check.
pub fn default_window(v: usize) -> (usize, usize) {
    let w = (v + 1).max((3 * v).div_ceil(2));
    (w, 2 * w + v + 2)
}

/// The weighted class sum as a polynomial in `T` with numeric coefficients.
pub fn orbital_from_lattices(report: &LatticeReport) -> TPoly {
    TPoly::from_coeffs(
        report
            .weighted_poly
            .iter()
            .map(|&c| QRatFun::from_bigint(c.into())),
    )
}

/// Determinant-valuation volumes over `F_Q`, `Q ∈ {2, 3, 4, 5, 7, 9}`.
pub fn det_valuation_table(a: usize, big_q: u64, n: usize) -> Result<VolumeTable> {
    match big_q {
        2 => count_det_valuations::<Fp<2>>(a, n),
        3 => count_det_valuations::<Fp<3>>(a, n),
        4 => count_det_valuations::<Fq2<2>>(a, n),
        5 => count_det_valuations::<Fp<5>>(a, n),
        7 => count_det_valuations::<Fp<7>>(a, n),
        9 => count_det_valuations::<Fq2<3>>(a, n),
        _ => Err(Error::InvalidParameter(format!("unsupported field order {big_q}"))),
    }
}

/// The unramified class statistic over `F_q`, `q ∈ {2, 3}`.
pub fn class_stat_table(q: u64, n: usize) -> Result<VolumeTable> {
    match q {
        2 => count_class_valuation_stat::<Fp<2>>(n),
        3 => count_class_valuation_stat::<Fp<3>>(n),
        _ => Err(Error::InvalidParameter(format!("class statistic supports q in {{2, 3}}, got {q}"))),
    }
}
