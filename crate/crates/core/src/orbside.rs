//! The orbital-integral side for `h = 2`: cells, the orbital polynomial in
//! `T = -q^(2s)`, its normalized derivative, and the comparison with the
//! intersection number.

use serde::Serialize;

use crate::algebra::{Rational, Ring};
use crate::error::{Error, Result};
use crate::exactalg::{dq_statistic, QRatFun, TPoly};
use crate::geomside;

/// A cell `(a, b, c)` of the orbital sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Cell {
    pub fn weight_exponent(&self) -> i64 {
        self.a + self.b - self.c.max(0)
    }

    pub fn length(&self) -> i64 {
        self.a + self.b - 2 * self.c
    }
}

fn check_v(v: u32) -> Result<i64> {
    if v.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("v = {v} must be odd")));
    }
    Ok(((v - 1) / 2) as i64)
}

/// All cells for `v`: `a, b >= 0`, `a >= c`, `b >= c`, `a + b - c <= (v-1)/2`.
pub fn cells(v: u32) -> Result<Vec<Cell>> {
    let half = check_v(v)?;
    let mut out = Vec::new();
    for c in -half..=half {
        for a in c.max(0)..=half {
            for b in c.max(0)..=half {
                if a + b - c <= half {
                    out.push(Cell { a, b, c });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `sum_cells q^weight (T^len + T^(v - len))`.
pub fn orbital_poly(v: u32) -> Result<TPoly> {
    let mut p = TPoly::zero();
    for cell in cells(v)? {
        let w = QRatFun::q_pow(cell.weight_exponent());
        p = p
            .add(&TPoly::checked_monomial(w.clone(), cell.length())?)
            .add(&TPoly::checked_monomial(w, v as i64 - cell.length())?);
    }
    Ok(p)
}

/// The same polynomial from the re-indexed sum over `l = a + b - max(0, c)`:
/// for `c < 0` the `l + 1` pairs with `a + b = l` contribute length `l - 2c`;
/// for `c >= 0` the `l - c + 1` pairs with `a + b = l + c`, `a, b >= c`
/// contribute length `l - c`.
pub fn orbital_poly_reindexed(v: u32) -> Result<TPoly> {
    let half = check_v(v)?;
    let mut p = TPoly::zero();
    for l in 0..=half {
        let ql = QRatFun::q_pow(l);
        let mut push = |count: i64, len: i64| -> Result<()> {
            let w = ql.mul_ref(&QRatFun::from_int(count));
            p = p
                .add(&TPoly::checked_monomial(w.clone(), len)?)
                .add(&TPoly::checked_monomial(w, v as i64 - len)?);
            Ok(())
        };
        for c in (l - half)..0 {
            push(l + 1, l - 2 * c)?;
        }
        for c in 0..=l {
            push(l - c + 1, l - c)?;
        }
    }
    Ok(p)
}

/// Closed form `N'(r) = sum_{l=0}^{(v-1)/2} ((-1)^l (l - r)/2 - (1 + r)/2) q^l`.
pub fn nprime_closed(v: u32) -> Result<QRatFun> {
    let half = check_v(v)?;
    let r = Rational::new(v.into(), 2.into());
    let mut total = QRatFun::zero();
    for l in 0..=half {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let lr = Rational::from_integer(l.into()) - &r;
        let coeff = lr * Rational::new(sign.into(), 2.into())
            - (Rational::from_integer(1.into()) + &r) / Rational::from_integer(2.into());
        total = total + QRatFun::from_rational(&coeff) * QRatFun::q_pow(l);
    }
    Ok(total)
}

/// `N'` as the normalized derivative of the orbital polynomial.
pub fn nprime(v: u32) -> Result<QRatFun> {
    Ok(dq_statistic(&orbital_poly(v)?))
}

fn half_int(num: i64) -> QRatFun {
    QRatFun::from_rational(&Rational::new(num.into(), 4.into()))
}

/// `N'(r+2) - N'(r)` from the coefficientwise difference of the closed form
/// (`v = 2r`): old terms change by `-((-1)^l + 1)`, and two new top terms appear.
fn nprime_increment_generic(v: i64) -> QRatFun {
    let top = (v - 1) / 2;
    let mut inc = QRatFun::zero();
    for l in 0..=top {
        let c = if l % 2 == 0 { -2 } else { 0 };
        inc = inc + QRatFun::from_int(c) * QRatFun::q_pow(l);
    }
    let sgn = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    // In quarters: (1/2 + (r+2)/2) = (v + 6)/4.
    let tail = v + 6;
    let e1 = top + 1;
    let e2 = top + 2;
    inc + (half_int(-3 * sgn(e1)) - half_int(tail)) * QRatFun::q_pow(e1)
        + (half_int(-sgn(e2)) - half_int(tail)) * QRatFun::q_pow(e2)
}

/// The increment in the two residue classes `2r = 1, 3 (mod 4)`.
fn nprime_increment_mod4(v: i64) -> QRatFun {
    let lo = (v + 1) / 2; // r + 1/2
    let hi = (v + 3) / 2; // r + 3/2
    let q = QRatFun::q_pow;
    let geometric = |e: i64| {
        (QRatFun::from_int(2) * (QRatFun::one() - q(e)))
            .div(&(QRatFun::one() - q(2)))
            .unwrap()
    };
    // r/2 + k/4 = (v + k)/4
    let inner = if v % 4 == 1 {
        geometric(hi) + half_int(v + 7) * q(hi) + half_int(v + 3) * q(lo)
    } else {
        geometric(lo) + half_int(v + 9) * q(lo) + half_int(v + 5) * q(hi)
    };
    -inner
}

/// `N'` unrolled from `N'(1/2) = -1` and `N'(3/2) = -(q + 2)`, requiring the
/// generic and mod-4 increments to agree at every step.
pub fn nprime_step(v: u32) -> Result<QRatFun> {
    check_v(v)?;
    let v = v as i64;
    let (mut cur, mut at) = if v % 4 == 1 {
        (QRatFun::from_int(-1), 1)
    } else {
        (QRatFun::poly(&[-2, -1]), 3)
    };
    while at < v {
        let g = nprime_increment_generic(at);
        let m = nprime_increment_mod4(at);
        if g != m {
            return Err(Error::RouteMismatch(format!(
                "N' step increments differ at v = {at}: {g} vs {m}"
            )));
        }
        cur = cur + g;
        at += 4;
    }
    Ok(cur)
}

/// Which relative position of the two tori the orbit falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    /// The matched case treated here.
    Invertible,
    /// The other two cases; the twisted integral vanishes identically at
    /// the center and its derivative is not computed.
    Degenerate,
}

/// Normalized derivative at the center, with the non-matched cases reported
/// as zero.
pub fn derivative_for(kind: OrbitKind, v: u32) -> Result<QRatFun> {
    match kind {
        OrbitKind::Invertible => nprime(v),
        OrbitKind::Degenerate => Ok(QRatFun::zero()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AflReport {
    pub v: u32,
    pub intersection: String,
    pub closed: String,
    pub step: String,
    pub nprime: String,
    pub nprime_closed: String,
    pub nprime_step: String,
    pub pass: bool,
    /// Names of the routes that disagree with the pipeline value.
    pub diverging: Vec<String>,
}

/// Checks `N = N_closed = N_step = -N'` with `N'` from all three routes.
pub fn afl_verify(v: u32) -> Result<AflReport> {
    let n = geomside::intersection_number(2, v)?;
    let closed = geomside::n_closed(v)?;
    let step = geomside::n_step(v)?;
    let np = nprime(v)?;
    let npc = nprime_closed(v)?;
    let nps = nprime_step(v)?;
    let mut diverging = Vec::new();
    for (name, val) in [
        ("closed", &closed),
        ("step", &step),
        ("-nprime", &-&np),
        ("-nprime_closed", &-&npc),
        ("-nprime_step", &-&nps),
    ] {
        if *val != n {
            diverging.push(name.to_string());
        }
    }
    Ok(AflReport {
        v,
        intersection: n.to_string(),
        closed: closed.to_string(),
        step: step.to_string(),
        nprime: np.to_string(),
        nprime_closed: npc.to_string(),
        nprime_step: nps.to_string(),
        pass: diverging.is_empty(),
        diverging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: i64, b: i64, c: i64) -> Cell {
        Cell { a, b, c }
    }

    #[test]
    fn small_cells() {
        assert_eq!(cells(1).unwrap(), vec![c(0, 0, 0)]);
        let mut want = vec![c(0, 0, -1), c(0, 0, 0), c(1, 0, 0), c(0, 1, 0), c(1, 1, 1)];
        want.sort();
        assert_eq!(cells(3).unwrap(), want);
        assert_eq!((c(1, 1, 1).weight_exponent(), c(1, 1, 1).length()), (1, 0));
    }

    #[test]
    fn small_polys() {
        let t = |cs: &[i64]| TPoly::from_coeffs(cs.iter().map(|&x| QRatFun::from_int(x)));
        assert_eq!(orbital_poly(1).unwrap(), t(&[1, 1]));
        let want = t(&[1, 1, 1, 1]).add(&t(&[1, 2, 2, 1]).scale(&QRatFun::q()));
        assert_eq!(orbital_poly(3).unwrap(), want);
        for v in [1, 3, 5] {
            assert!(orbital_poly(v).unwrap().eval(&QRatFun::from_int(-1)).is_zero());
            assert_eq!(orbital_poly(v).unwrap(), orbital_poly_reindexed(v).unwrap());
        }
    }

    #[test]
    fn nprime_values() {
        assert_eq!(nprime(1).unwrap(), QRatFun::from_int(-1));
        assert_eq!(nprime(3).unwrap(), QRatFun::poly(&[-2, -1]));
        assert_eq!(nprime_closed(5).unwrap(), QRatFun::poly(&[-3, -1, -2]));
        assert_eq!(nprime_step(5).unwrap(), QRatFun::poly(&[-3, -1, -2]));
        assert_eq!(nprime_step(7).unwrap(), QRatFun::poly(&[-4, -1, -3, -2]));
        assert_eq!(nprime_step(1).unwrap(), QRatFun::from_int(-1));
    }

    #[test]
    fn afl_small() {
        for v in [1, 3, 5, 7] {
            let r = afl_verify(v).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn degenerate_orbits_have_zero_derivative() {
        assert!(derivative_for(OrbitKind::Degenerate, 3).unwrap().is_zero());
    }
}
