//! The intersection-number side: the `a0 / a / A / B / C` recursion system,
//! the general-`h` intersection number, and the `h = 2` closed form and
//! step recursion.
//!
//! The discrete evaluation index `m` of the `C`-identity is replaced by the
//! variable `Z = q^(2m)`, so `A`, `A0` and `C` become rational functions in
//! `Z` and every limit becomes an exact evaluation with cancellation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{Rational, Ring};
use crate::exactalg::{QRatFun, ZRatFun};
use crate::error::{Error, Result};

fn q(k: i64) -> QRatFun {
    QRatFun::q_pow(k)
}

fn one() -> QRatFun {
    QRatFun::one()
}

fn int(n: i64) -> QRatFun {
    QRatFun::from_int(n)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

fn frac(a: &QRatFun, b: &QRatFun) -> QRatFun {
    a.div(b).expect("nonzero denominator")
}

/// Parameters `(h, v)` with `r = v/h`, `Gr = ceil(r)` and `c_n = ceil(n r / 2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeomParams {
    pub h: u32,
    pub v: u32,
    #[serde(serialize_with = "ser_rational")]
    pub r: Rational,
    pub gr: i64,
    /// `c[n]` for `n = 0..=h`.
    pub c: Vec<i64>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl GeomParams {
    pub fn new(h: u32, v: u32) -> Result<Self> {
        if h == 0 || v == 0 || v.is_multiple_of(2) || num_integer::gcd(v, h) != 1 {
            return Err(Error::ConditionStar { h, v });
        }
        let (h64, v64) = (h as i64, v as i64);
        let c = (0..=h64).map(|n| ceil_div(n * v64, 2 * h64)).collect();
        Ok(GeomParams {
            h,
            v,
            r: Rational::new(BigInt::from(v), BigInt::from(h)),
            gr: ceil_div(v64, h64),
            c,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsilonKind {
    F,
    K,
}

/// `eps_F,n = prod_{i<=n} (1 - q^-i)` and `eps_K,n = prod_{i<=n} (1 - q^-2i)`.
pub fn epsilon(kind: EpsilonKind, n: u32) -> QRatFun {
    let step = match kind {
        EpsilonKind::F => 1,
        EpsilonKind::K => 2,
    };
    (1..=n as i64).fold(one(), |acc, i| acc * (one() - q(-step * i)))
}

/// `a0(n, n-m) = q^(-2m) prod_{0<=i<n, i!=m} 1/(1 - q^(-2(m-i)))`.
pub fn a0_base(n: u32, m: u32) -> QRatFun {
    let (n, m) = (n as i64, m as i64);
    let den = (0..n)
        .filter(|&i| i != m)
        .fold(one(), |acc, i| acc * (one() - q(-2 * (m - i))));
    frac(&q(-2 * m), &den)
}

/// `A0(n, .)` as a function of `Z`: `Z^(n-1) / prod_{i=1..n} (Z - q^(2(n-i)))`.
pub fn a0_fn(n: u32) -> ZRatFun {
    if n == 0 {
        return ZRatFun::one();
    }
    let mut f = ZRatFun::z_pow(n as i64 - 1);
    for i in 1..=n as i64 {
        f = f.mul(&ZRatFun::pole(&q(2 * (n as i64 - i)), 1));
    }
    f
}

/// `A0(n, k)`: the generating value `q^(-2n) X prod 1/(1 - q^(-2i) X)` at `X = q^(2k)`.
pub fn a0_eval(n: u32, k: i64) -> Result<QRatFun> {
    a0_fn(n).substitute_z(2 * (n as i64 - k))
}

/// `B(0..=max)` from the recursion
/// `B(a) = prod_{i<=a} (1 - q^(1-2i))/(1 - q^(-2i)) - sum_{i=1..a} A0(i,0) B(a-i)`.
pub fn b_values(max: u32) -> Result<Vec<QRatFun>> {
    let mut b: Vec<QRatFun> = Vec::with_capacity(max as usize + 1);
    for a in 0..=max as i64 {
        let prod = (1..=a).fold(one(), |acc, i| {
            acc * frac(&(one() - q(1 - 2 * i)), &(one() - q(-2 * i)))
        });
        let mut val = prod;
        for i in 1..=a {
            val = val - a0_eval(i as u32, 0)? * &b[(a - i) as usize];
        }
        b.push(val);
    }
    Ok(b)
}

pub fn b_val(c: u32) -> Result<QRatFun> {
    Ok(b_values(c)?.pop().unwrap())
}

/// Memoizing evaluator of the `r`-dependent recursions for one `(h, v)`.
#[derive(Clone, Debug)]
pub struct GeomEngine {
    params: GeomParams,
    a: BTreeMap<(u32, u32), QRatFun>,
    a_fns: BTreeMap<u32, ZRatFun>,
    c_fns: BTreeMap<u32, ZRatFun>,
    c_vals: BTreeMap<(u32, i64), QRatFun>,
    b: Vec<QRatFun>,
}

impl GeomEngine {
    pub fn new(params: GeomParams) -> Self {
        GeomEngine {
            params,
            a: BTreeMap::new(),
            a_fns: BTreeMap::new(),
            c_fns: BTreeMap::new(),
            c_vals: BTreeMap::new(),
            b: Vec::new(),
        }
    }

    pub fn for_hv(h: u32, v: u32) -> Result<Self> {
        Ok(Self::new(GeomParams::new(h, v)?))
    }

    pub fn params(&self) -> &GeomParams {
        &self.params
    }

    fn c_n(&self, n: u32) -> i64 {
        // c_n is only tabulated up to h; the recursions never ask beyond it,
        // but the formula itself is fine for any n.
        let (h, v) = (self.params.h as i64, self.params.v as i64);
        ceil_div(n as i64 * v, 2 * h)
    }

    /// `a(n, n-m) = a0(n, n-m) - sum_{i=1..m} C(i, m) a(n-i, n-m)` for `m < n`.
    pub fn a_rec(&mut self, n: u32, m: u32) -> Result<QRatFun> {
        assert!(m < n, "a_rec needs m < n");
        if let Some(v) = self.a.get(&(n, m)) {
            return Ok(v.clone());
        }
        let mut val = a0_base(n, m);
        for i in 1..=m {
            let c = self.c_eval(i, m as i64)?;
            let prev = self.a_rec(n - i, m - i)?;
            val = val - c * prev;
        }
        self.a.insert((n, m), val.clone());
        Ok(val)
    }

    /// `A(n, .)` in `Z = q^(2m)`: `sum_i a(n, n-i) q^(2 i c_n) / (Z^(c_n - 1) (Z - q^(2i)))`.
    pub fn a_fn(&mut self, n: u32) -> Result<ZRatFun> {
        if n == 0 {
            return Ok(ZRatFun::one());
        }
        if let Some(f) = self.a_fns.get(&n) {
            return Ok(f.clone());
        }
        let cn = self.c_n(n);
        let mut f = ZRatFun::zero();
        for i in 0..n {
            let coeff = self.a_rec(n, i)? * q(2 * i as i64 * cn);
            let term = ZRatFun::z_pow(1 - cn)
                .mul(&ZRatFun::pole(&q(2 * i as i64), 1))
                .scale(&coeff);
            f = f.add(&term);
        }
        self.a_fns.insert(n, f.clone());
        Ok(f)
    }

    pub fn a_eval(&mut self, n: u32, k: i64) -> Result<QRatFun> {
        if n == 0 {
            return Ok(one());
        }
        self.a_fn(n)?.substitute_z(2 * (n as i64 - k))
    }

    /// `C(n, .)` in `Z = q^(2m)`, solved from
    /// `A0(n, n-m) = sum_{i=0..n} C(i, m) A(n-i, n-m)`.
    pub fn c_fn(&mut self, n: u32) -> Result<ZRatFun> {
        if n == 0 {
            return Ok(ZRatFun::one());
        }
        if let Some(f) = self.c_fns.get(&n) {
            return Ok(f.clone());
        }
        let mut f = a0_fn(n);
        for i in 0..n {
            let shifted = self.a_fn(n - i)?.scale_z(&q(-2 * i as i64))?;
            f = f.sub(&self.c_fn(i)?.mul(&shifted));
        }
        self.c_fns.insert(n, f.clone());
        Ok(f)
    }

    pub fn c_eval(&mut self, n: u32, m: i64) -> Result<QRatFun> {
        if n == 0 {
            return Ok(one());
        }
        if let Some(v) = self.c_vals.get(&(n, m)) {
            return Ok(v.clone());
        }
        let v = self.c_fn(n)?.substitute_z(2 * m)?;
        self.c_vals.insert((n, m), v.clone());
        Ok(v)
    }

    pub fn b_val(&mut self, c: u32) -> Result<QRatFun> {
        if self.b.len() <= c as usize {
            self.b = b_values(c.max(self.params.h))?;
        }
        Ok(self.b[c as usize].clone())
    }

    /// One cell `(a, b, c)` of the intersection sum:
    /// `q^(a v) A(a, 0) C(b, -c) B(c)`.
    pub fn cell_term(&mut self, a: u32, b: u32, c: u32) -> Result<QRatFun> {
        let weight = q(a as i64 * self.params.v as i64);
        Ok(weight * self.a_eval(a, 0)? * self.c_eval(b, -(c as i64))? * self.b_val(c)?)
    }

    /// The intersection number as the sum over `a + b + c = h`.
    pub fn intersection_number(&mut self) -> Result<QRatFun> {
        let h = self.params.h;
        let mut total = QRatFun::zero();
        for a in 0..=h {
            for b in 0..=h - a {
                total = total + self.cell_term(a, b, h - a - b)?;
            }
        }
        Ok(total)
    }

    /// Residual of the defining identity for `C` at integer `m`:
    /// `A0(n, n-m) - sum_i C(i, m) A(n-i, n-m)`.
    pub fn c_identity_residual(&mut self, n: u32, m: i64) -> Result<QRatFun> {
        let mut res = a0_eval(n, n as i64 - m)?;
        for i in 0..=n {
            let a = self.a_eval(n - i, n as i64 - m)?;
            res = res - self.c_eval(i, m)? * a;
        }
        Ok(res)
    }

    /// Every memoized `a`, `C` and `B` value, for reports.
    pub fn memo_snapshot(&self) -> MemoSnapshot {
        MemoSnapshot {
            a: self.a.iter().map(|(&(n, m), v)| (n, m, v.to_string())).collect(),
            c: self.c_vals.iter().map(|(&(n, m), v)| (n, m, v.to_string())).collect(),
            b: self.b.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MemoSnapshot {
    /// `(n, m, a(n, n-m))`
    pub a: Vec<(u32, u32, String)>,
    /// `(n, m, C(n, m))`
    pub c: Vec<(u32, i64, String)>,
    pub b: Vec<String>,
}

pub fn intersection_number(h: u32, v: u32) -> Result<QRatFun> {
    GeomEngine::for_hv(h, v)?.intersection_number()
}

fn check_h2(v: u32) -> Result<()> {
    if v.is_multiple_of(2) || v == 0 {
        return Err(Error::ConditionStar { h: 2, v });
    }
    Ok(())
}

/// Closed form of `N(r)` for `h = 2`, `r = v/2`.
pub fn n_closed(v: u32) -> Result<QRatFun> {
    check_h2(v)?;
    let v = v as i64;
    let gr = (v + 1) / 2;
    let cr = ceil_div(v, 4);
    let d = one() - q(-2);
    let d2 = d.clone() * &d;
    let t1 = frac(&(q(-2 - 2 * cr + 2 * gr) - q(-4)), &d2);
    let t2 = frac(&(int(cr - 1) * q(2 * cr - 2)), &d);
    let t3 = frac(&(int(gr) * q(-2)), &d);
    let t4 = frac(&((q(2 * cr - 2) - q(-2)) * (one() - q(-1) - q(-2))), &d2);
    let t5 = frac(&(int(cr) * q(-2 * cr + v)), &d);
    Ok(t1 + t2 - t3 + t4 + t5)
}

/// `N(r+2) - N(r)` as the general simplification in `Gr` and `ceil(r/2)`.
fn n_increment_generic(v: i64) -> QRatFun {
    let gr = (v + 1) / 2;
    let cr = ceil_div(v, 4);
    frac(&(int(2) * (one() - q(2 * cr))), &(one() - q(2)))
        + int(gr + 2 - cr) * q(2 * cr)
        + int(gr - cr + 1) * q(2 * gr - 2 * cr + 1)
}

/// The same increment specialized by `v mod 4`, with `v = 4k+1` or `4k+3`.
fn n_increment_mod4(v: i64) -> QRatFun {
    let k = v / 4;
    let geometric = |e: i64| frac(&(int(2) * (one() - q(e))), &(one() - q(2)));
    if v % 4 == 1 {
        geometric(2 * k + 2) + int(k + 2) * q(2 * k + 2) + int(k + 1) * q(2 * k + 1)
    } else {
        geometric(2 * k + 2) + int(k + 3) * q(2 * k + 2) + int(k + 2) * q(2 * k + 3)
    }
}

/// `N(r)` unrolled from `N(1/2) = 1`, `N(3/2) = q + 2`, checking at every
/// step that the general and the mod-4 increments agree.
pub fn n_step(v: u32) -> Result<QRatFun> {
    check_h2(v)?;
    let v = v as i64;
    let (mut cur, mut at) = if v % 4 == 1 {
        (one(), 1)
    } else {
        (QRatFun::poly(&[2, 1]), 3)
    };
    while at < v {
        let g = n_increment_generic(at);
        let m = n_increment_mod4(at);
        if g != m {
            return Err(Error::RouteMismatch(format!(
                "N step increments differ at v = {at}: {g} vs {m}"
            )));
        }
        cur = cur + g;
        at += 4;
    }
    Ok(cur)
}
