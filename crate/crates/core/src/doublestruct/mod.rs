//! Double structures on `M_{2h}`: a base point `x0` and a second point `x`
//! of the conjugacy variety of `zeta`, with the bisector numerators
//! `M = x - x0^sigma`, `E = x - x0` and the central scalar `delta`.
//!
//! Only the numerators and `delta = (zeta - zeta^sigma)^2` are used, so the
//! normalized objects are `M^2 / delta`, `E^2 / delta` and `M E / delta`.

mod checks;
mod newton;

pub use checks::{dominance_suite, identity_suite, IdentityReport, ShortcutReport};
pub use newton::{root_valuation_range, transformed_poly};

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{Poly, Rational, Ring};
use crate::error::{Error, Result};
use crate::localring::{FiniteField, RingMatrix, TruncSeries, Valuation};

/// `zeta` through its trace `s` and norm `p`, plus its two roots when split.
#[derive(Clone, Debug, PartialEq)]
pub struct Zeta<R> {
    pub s: R,
    pub p: R,
    roots: Option<(R, R)>,
}

impl<R: Ring> Zeta<R> {
    /// A non-split `zeta` given by the quadratic `X^2 - s X + p`.
    pub fn new(s: R, p: R) -> Result<Self> {
        let z = Zeta { s, p, roots: None };
        z.delta_inverse()?;
        Ok(z)
    }

    /// The split `zeta = (a, b)`.
    pub fn split(a: R, b: R) -> Result<Self> {
        let z = Zeta {
            s: a.add_ref(&b),
            p: a.mul_ref(&b),
            roots: Some((a, b)),
        };
        z.delta_inverse()?;
        Ok(z)
    }

    pub fn delta(&self) -> R {
        self.s.mul_ref(&self.s).sub_ref(&self.p.mul_ref(&R::from_int(4)))
    }

    fn delta_inverse(&self) -> Result<R> {
        self.delta().checked_inverse().map_err(|e| match e {
            Error::InsufficientPrecision => e,
            _ => Error::DegenerateZeta,
        })
    }

    pub fn roots(&self) -> Option<&(R, R)> {
        self.roots.as_ref()
    }

    pub fn is_split(&self) -> bool {
        self.roots.is_some()
    }

    pub fn min_poly(&self) -> Poly<R> {
        Poly::new(vec![self.p.clone(), self.s.negate(), R::one()])
    }
}

/// A point of the conjugacy variety: a `2h x 2h` matrix annihilated by the
/// minimal polynomial of `zeta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SPoint<R> {
    pub h: usize,
    pub zeta: Zeta<R>,
    pub x: RingMatrix<R>,
}

impl<R: Ring> SPoint<R> {
    pub fn new(h: usize, zeta: Zeta<R>, x: RingMatrix<R>) -> Result<Self> {
        if x.rows() != 2 * h || !x.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                x.rows(),
                x.cols(),
                n = 2 * h
            )));
        }
        Ok(SPoint { h, zeta, x })
    }

    pub fn dim(&self) -> usize {
        2 * self.h
    }

    /// `x^2 - s x + p = 0` and `charpoly(x) = (X^2 - s X + p)^h`.
    pub fn satisfies_invariants(&self) -> bool {
        let n = self.dim();
        let quad = self
            .x
            .mul(&self.x)
            .sub(&self.x.scale(&self.zeta.s))
            .add(&RingMatrix::scalar(n, self.zeta.p.clone()));
        quad.is_zero() && self.x.charpoly() == self.zeta.min_poly().pow(self.h as u32)
    }

    /// `y^sigma = s I - y`.
    pub fn sigma(&self, y: &RingMatrix<R>) -> RingMatrix<R> {
        RingMatrix::scalar(y.rows(), self.zeta.s.clone()).sub(y)
    }

    pub fn conjugate(&self) -> RingMatrix<R> {
        self.sigma(&self.x)
    }
}

/// The distinguished point `x0`: `diag(a I, b I)` when split, otherwise a
/// block diagonal of companion matrices.
pub fn base_point<R: Ring>(h: usize, zeta: &Zeta<R>) -> Result<SPoint<R>> {
    zeta.delta_inverse()?;
    let n = 2 * h;
    let x = match zeta.roots() {
        Some((a, b)) => RingMatrix::diag(
            &(0..n)
                .map(|i| if i < h { a.clone() } else { b.clone() })
                .collect::<Vec<_>>(),
        ),
        None => {
            let mut m = RingMatrix::zeros(n, n);
            for k in 0..h {
                let o = 2 * k;
                m.set(o, o + 1, zeta.p.negate());
                m.set(o + 1, o, R::one());
                m.set(o + 1, o + 1, zeta.s.clone());
            }
            m
        }
    };
    SPoint::new(h, zeta.clone(), x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BisectorData<R> {
    pub m: RingMatrix<R>,
    pub e: RingMatrix<R>,
    pub delta: R,
}

fn same_structure<R: Ring>(x0: &SPoint<R>, x: &SPoint<R>) -> Result<()> {
    if x0.h != x.h || x0.zeta != x.zeta {
        return Err(Error::DimensionMismatch(
            "points belong to different zeta or rank".into(),
        ));
    }
    Ok(())
}

pub fn bisectors<R: Ring>(x0: &SPoint<R>, x: &SPoint<R>) -> Result<BisectorData<R>> {
    same_structure(x0, x)?;
    Ok(BisectorData {
        m: x.x.sub(&x0.conjugate()),
        e: x.x.sub(&x0.x),
        delta: x0.zeta.delta(),
    })
}

/// `M^2 / delta`.
pub fn normalized_centralizer<R: Ring>(bd: &BisectorData<R>) -> Result<RingMatrix<R>> {
    Ok(bd.m.mul(&bd.m).scale(&bd.delta.checked_inverse()?))
}

/// The angle operator `Theta = M E / delta`.
pub fn theta<R: Ring>(bd: &BisectorData<R>) -> Result<RingMatrix<R>> {
    Ok(bd.m.mul(&bd.e).scale(&bd.delta.checked_inverse()?))
}

/// Monic degree-`h` invariant polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct InvPoly<R>(pub Poly<R>);

impl<R: Ring> InvPoly<R> {
    pub fn poly(&self) -> &Poly<R> {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }
}

/// Characteristic polynomial of `M^2 / delta` on the `a`-eigenspace of `x0`;
/// the `b`-block must give the same polynomial.
pub fn invariant_polynomial<R: Ring>(x0: &SPoint<R>, x: &SPoint<R>) -> Result<InvPoly<R>> {
    same_structure(x0, x)?;
    let h = x0.h;
    let c = normalized_centralizer(&bisectors(x0, x)?)?;
    if x0.zeta.is_split() {
        let top = c.block(0, 0, h, h).charpoly();
        let bottom = c.block(h, h, h, h).charpoly();
        if top != bottom {
            return Err(Error::BlockMismatch);
        }
        Ok(InvPoly(top))
    } else if h == 1 {
        let s = c.get(0, 0).clone();
        if c != RingMatrix::scalar(2, s.clone()) {
            return Err(Error::BlockMismatch);
        }
        Ok(InvPoly(Poly::linear_root(&s)))
    } else {
        Err(Error::Unsupported(
            "invariant polynomial for non-split zeta needs h = 1".into(),
        ))
    }
}

fn invert_or<R: Ring>(m: &RingMatrix<R>, err: Error) -> Result<RingMatrix<R>> {
    m.inverse().map_err(|e| match e {
        Error::InsufficientPrecision => e,
        _ => err,
    })
}

/// The polar stereographic coordinate `E M^{-1}`.
pub fn stereographic<R: Ring>(x0: &SPoint<R>, x: &SPoint<R>) -> Result<RingMatrix<R>> {
    let bd = bisectors(x0, x)?;
    Ok(bd.e.mul(&invert_or(&bd.m, Error::StereographicUndefined)?))
}

/// `x = (I - y)^{-1} (x0 - y x0^sigma)` for semilinear `y`.
pub fn inverse_stereographic<R: Ring>(x0: &SPoint<R>, y: &RingMatrix<R>) -> Result<SPoint<R>> {
    let sig = x0.conjugate();
    if y.mul(&x0.x) != sig.mul(y) {
        return Err(Error::NotSemilinear);
    }
    let n = x0.dim();
    let inv = invert_or(
        &RingMatrix::identity(n).sub(y),
        Error::InverseStereographicUndefined,
    )?;
    let x = inv.mul(&x0.x.sub(&y.mul(&sig)));
    SPoint::new(x0.h, x0.zeta.clone(), x)
}

/// Splits `g` into the part commuting with `x0` and the part that is
/// semilinear for it, `g = g_plus + g_minus`.
pub fn g_decompose<R: Ring>(
    g: &RingMatrix<R>,
    x0: &SPoint<R>,
) -> Result<(RingMatrix<R>, RingMatrix<R>)> {
    let sig = x0.conjugate();
    // D = x0 - x0^sigma satisfies D^2 = delta I.
    let d = x0.x.sub(&sig);
    let d_inv = d.scale(&x0.zeta.delta().checked_inverse()?);
    let plus = d_inv.mul(&g.mul(&x0.x).sub(&sig.mul(g)));
    let minus = d_inv.mul(&x0.x.mul(g).sub(&g.mul(&x0.x)));
    Ok((plus, minus))
}

/// Valuation of `P(1)` and the derived parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarParams {
    pub v: usize,
    #[serde(serialize_with = "ser_rational")]
    pub r: Rational,
    pub ok: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `v = v(P(1))`, `r = v / h`, and whether `v` is odd and coprime to `h`.
pub fn star_params<F: Ring>(p: &InvPoly<TruncSeries<F>>, h: usize) -> Result<StarParams> {
    let v = p.poly().eval(&TruncSeries::one()).valuation().finite()?;
    Ok(star_from_valuation(v, h))
}

pub fn star_from_valuation(v: usize, h: usize) -> StarParams {
    StarParams {
        v,
        r: Rational::new(BigInt::from(v), BigInt::from(h)),
        ok: v % 2 == 1 && num_integer::gcd(v, h) == 1,
    }
}

fn valuation_of<F: Ring>(x: &TruncSeries<F>) -> Result<usize> {
    match x.valuation() {
        Valuation::Finite(v) => Ok(v),
        Valuation::AtLeast(_) => Err(Error::InsufficientPrecision),
    }
}

/// `v(Res(P, Q))` when `Q` dominates `P`, read off as
/// `deg P * v(Q(1)) + deg Q * v(P(0))`.
pub fn res_shortcut<F: Ring>(
    p: &InvPoly<TruncSeries<F>>,
    q: &InvPoly<TruncSeries<F>>,
) -> Result<usize> {
    let (p_lo, _) = root_valuation_range(&transformed_poly(p.poly()))?;
    let (_, q_hi) = root_valuation_range(&transformed_poly(q.poly()))?;
    if p_lo <= q_hi {
        return Err(Error::DominanceFails);
    }
    let one = TruncSeries::one();
    let q1 = valuation_of(&q.poly().eval(&one))?;
    let p0 = valuation_of(&p.poly().coeff(0))?;
    Ok(p.degree() * q1 + q.degree() * p0)
}

/// The pair `(x0, x)` for `h = 2`, `zeta = (1, 0)` obtained from the
/// semilinear point `y = [[0, I], [B, 0]]` with `B = [[0, t^v], [1, 0]]`.
/// The invariant polynomial then has `v(P(1)) = v` and `v(P(0)) = 0`.
pub fn build_matched_pair<F: FiniteField>(
    v: usize,
    prec: usize,
) -> Result<(SPoint<TruncSeries<F>>, SPoint<TruncSeries<F>>)> {
    if v.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("v = {v} must be odd")));
    }
    if prec <= v + 1 {
        return Err(Error::InvalidParameter(format!(
            "precision {prec} too small for v = {v}"
        )));
    }
    type S<F> = TruncSeries<F>;
    let c = |x: i64| S::<F>::constant(F::from_int(x), prec);
    let zeta = Zeta::split(c(1), c(0))?;
    let x0 = base_point(2, &zeta)?;
    let tv = S::<F>::monomial(F::one(), v, prec);
    let y = RingMatrix::from_rows(vec![
        vec![c(0), c(0), c(1), c(0)],
        vec![c(0), c(0), c(0), c(1)],
        vec![c(0), tv, c(0), c(0)],
        vec![c(1), c(0), c(0), c(0)],
    ]);
    let x = inverse_stereographic(&x0, &y)?;
    Ok((x0, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::localring::Fp;

    type Q = Rational;

    fn qm(rows: &[&[(i64, i64)]]) -> RingMatrix<Q> {
        RingMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect())
                .collect(),
        )
    }

    fn h1() -> (SPoint<Q>, SPoint<Q>) {
        let z = Zeta::split(rat(1, 1), rat(0, 1)).unwrap();
        let x0 = base_point(1, &z).unwrap();
        let x = SPoint::new(1, z, qm(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]])).unwrap();
        (x0, x)
    }

    #[test]
    fn base_points() {
        let z = Zeta::split(rat(1, 1), rat(0, 1)).unwrap();
        assert_eq!(base_point(1, &z).unwrap().x, qm(&[&[(1, 1), (0, 1)], &[(0, 1), (0, 1)]]));
        let x = base_point(2, &z).unwrap();
        assert_eq!(x.x, RingMatrix::diag(&[rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)]));
        type S = TruncSeries<Fp<2>>;
        let u = S::one();
        let zu = Zeta::new(S::from_int(-1), u.clone()).unwrap();
        let b = base_point(1, &zu).unwrap();
        let want = RingMatrix::from_rows(vec![vec![S::zero(), u.negate()], vec![S::one(), S::from_int(-1)]]);
        assert_eq!(b.x, want);
        assert!(b.satisfies_invariants());
        assert_eq!(Zeta::split(rat(1, 1), rat(1, 1)).unwrap_err(), Error::DegenerateZeta);
    }

    #[test]
    fn bisector_examples() {
        let (x0, x) = h1();
        let bd = bisectors(&x0, &x).unwrap();
        assert_eq!(bd.m, qm(&[&[(1, 2), (1, 2)], &[(1, 2), (-1, 2)]]));
        assert_eq!(bd.e, qm(&[&[(-1, 2), (1, 2)], &[(1, 2), (1, 2)]]));
        assert_eq!(bd.delta, rat(1, 1));
        assert_eq!(normalized_centralizer(&bd).unwrap(), RingMatrix::scalar(2, rat(1, 2)));
        assert_eq!(invariant_polynomial(&x0, &x).unwrap().0, Poly::linear_root(&rat(1, 2)));
        let y = stereographic(&x0, &x).unwrap();
        assert_eq!(y, qm(&[&[(0, 1), (-1, 1)], &[(1, 1), (0, 1)]]));
        assert_eq!(inverse_stereographic(&x0, &y).unwrap().x, x.x);

        let x2 = SPoint::new(1, x0.zeta.clone(), qm(&[&[(1, 1), (1, 1)], &[(0, 1), (0, 1)]])).unwrap();
        let bd2 = bisectors(&x0, &x2).unwrap();
        assert_eq!(bd2.m, qm(&[&[(1, 1), (1, 1)], &[(0, 1), (-1, 1)]]));
        assert_eq!(bd2.e, qm(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]));
        assert_eq!(normalized_centralizer(&bd2).unwrap(), RingMatrix::identity(2));
    }

    #[test]
    fn degenerate_points() {
        let (x0, _) = h1();
        let bd = bisectors(&x0, &x0).unwrap();
        assert!(bd.e.is_zero());
        assert_eq!(normalized_centralizer(&bd).unwrap(), RingMatrix::identity(2));
        assert!(stereographic(&x0, &x0).unwrap().is_zero());
        let sig = SPoint::new(1, x0.zeta.clone(), x0.conjugate()).unwrap();
        assert_eq!(stereographic(&x0, &sig).unwrap_err(), Error::StereographicUndefined);
        assert_eq!(inverse_stereographic(&x0, &RingMatrix::zeros(2, 2)).unwrap().x, x0.x);
        let z2 = Zeta::split(rat(1, 1), rat(0, 1)).unwrap();
        let b2 = base_point(2, &z2).unwrap();
        let p = invariant_polynomial(&b2, &b2).unwrap();
        assert_eq!(p.0, Poly::linear_root(&rat(1, 1)).pow(2));
    }

    #[test]
    fn g_decompose_examples() {
        let (x0, _) = h1();
        let (p, m) = g_decompose(&RingMatrix::identity(2), &x0).unwrap();
        assert_eq!((p, m.is_zero()), (RingMatrix::identity(2), true));
        let (p, m) = g_decompose(&x0.x, &x0).unwrap();
        assert_eq!((p, m.is_zero()), (x0.x.clone(), true));
    }

    #[test]
    fn matched_pairs() {
        for v in [1usize, 3, 5] {
            let (x0, x) = build_matched_pair::<Fp<2>>(v, v + 6).unwrap();
            assert!(x.satisfies_invariants());
            let p = invariant_polynomial(&x0, &x).unwrap();
            assert_eq!(p.degree(), 2);
            let sp = star_params(&p, 2).unwrap();
            assert_eq!((sp.v, sp.ok), (v, true));
            assert_eq!(p.poly().coeff(0).valuation(), Valuation::Finite(0));
            assert!(x.x.entries().iter().all(|e| e.prec() == v + 6));
        }
        let (x0, x) = build_matched_pair::<Fp<2>>(3, 9).unwrap();
        let p = invariant_polynomial(&x0, &x).unwrap();
        assert_eq!(star_params(&p, 2).unwrap().r, rat(3, 2));
        assert!(build_matched_pair::<Fp<2>>(2, 9).is_err());
        assert!(!star_from_valuation(4, 2).ok);
        assert!(!star_from_valuation(3, 3).ok);
    }

    #[test]
    fn shortcut_examples() {
        type S = TruncSeries<Fp<3>>;
        let n = 6;
        let s = |c: &[i64]| S::new(c.iter().map(|&x| Fp::from_int(x)).collect(), n);
        let lin = |c: &[i64]| InvPoly(Poly::linear_root(&s(c)));
        let p = lin(&[1, 0, 0, 1]);
        let q = lin(&[1, 1]);
        assert_eq!(res_shortcut(&p, &q).unwrap(), 1);
        let brute = crate::localring::resultant(p.poly(), q.poly()).valuation();
        assert_eq!(brute, Valuation::Finite(1));
        assert_eq!(res_shortcut(&lin(&[1, 1]), &lin(&[2])).unwrap(), 0);
        assert_eq!(res_shortcut(&p, &p).unwrap_err(), Error::DominanceFails);
    }
}
