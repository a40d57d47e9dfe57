use std::collections::BTreeMap;
use std::fmt;

use super::QRatFun;
use crate::algebra::{Poly, Ring};
use crate::error::{Error, Result};

type ZPolyQ = Poly<QRatFun>;

/// A rational function in `Z` whose coefficients are rational functions in `q`.
///
/// The denominator is kept factored as `prod (Z - c)^m * rest` with `rest`
/// monic. Every denominator the recursions build is a product of linear
/// factors `Z - q^k`, so cancellation reduces to synthetic division and no
/// Euclidean gcd over `Q(q)[Z]` is needed on the hot path. `rest` holds
/// anything else (only reachable through general division).
#[derive(Clone)]
pub struct ZRatFun {
    num: ZPolyQ,
    poles: BTreeMap<QRatFun, u32>,
    rest: ZPolyQ,
}

impl ZRatFun {
    fn build(num: ZPolyQ, poles: BTreeMap<QRatFun, u32>, rest: ZPolyQ) -> Self {
        let mut f = ZRatFun { num, poles, rest };
        f.cancel();
        f
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.poles.clear();
            self.rest = Poly::one();
            return;
        }
        let mut emptied = Vec::new();
        for (c, m) in self.poles.iter_mut() {
            while *m > 0 {
                let (quot, val) = self.num.div_linear(c);
                if !val.is_zero() {
                    break;
                }
                self.num = quot;
                *m -= 1;
            }
            if *m == 0 {
                emptied.push(c.clone());
            }
        }
        for c in emptied {
            self.poles.remove(&c);
        }
        if self.rest.degree().unwrap_or(0) > 0 {
            let g = self.num.gcd(&self.rest).expect("nonzero gcd");
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.div_rem(&g).unwrap().0;
                self.rest = self.rest.div_rem(&g).unwrap().0;
            }
        }
    }

    pub fn constant(c: QRatFun) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(QRatFun::one())
    }

    pub fn from_poly(p: ZPolyQ) -> Self {
        ZRatFun {
            num: p,
            poles: BTreeMap::new(),
            rest: Poly::one(),
        }
    }

    /// `Z^k` for any integer `k`.
    pub fn z_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(QRatFun::one(), k as usize))
        } else {
            Self::pole(&QRatFun::zero(), k.unsigned_abs() as u32)
        }
    }

    /// `1 / (Z - c)^m`
    pub fn pole(c: &QRatFun, m: u32) -> Self {
        let mut poles = BTreeMap::new();
        if m > 0 {
            poles.insert(c.clone(), m);
        }
        ZRatFun {
            num: Poly::one(),
            poles,
            rest: Poly::one(),
        }
    }

    /// `Z - c`
    pub fn linear(c: &QRatFun) -> Self {
        Self::from_poly(Poly::linear_root(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &ZPolyQ {
        &self.num
    }

    /// Expanded monic denominator.
    pub fn denominator(&self) -> ZPolyQ {
        self.poles
            .iter()
            .fold(self.rest.clone(), |acc, (c, &m)| {
                acc.mul(&Poly::linear_root(c).pow(m))
            })
    }

    pub fn poles(&self) -> impl Iterator<Item = (&QRatFun, u32)> {
        self.poles.iter().map(|(c, &m)| (c, m))
    }

    pub fn scale(&self, c: &QRatFun) -> Self {
        Self::build(self.num.scale(c), self.poles.clone(), self.rest.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut poles = self.poles.clone();
        for (c, &m) in &rhs.poles {
            let e = poles.entry(c.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let (rest, co_l, co_r) = if self.rest == rhs.rest {
            (self.rest.clone(), Poly::one(), Poly::one())
        } else if self.rest.degree() == Some(0) {
            (rhs.rest.clone(), rhs.rest.clone(), Poly::one())
        } else if rhs.rest.degree() == Some(0) {
            (self.rest.clone(), Poly::one(), self.rest.clone())
        } else {
            let g = self.rest.gcd(&rhs.rest).unwrap();
            let co_l = rhs.rest.div_rem(&g).unwrap().0;
            let co_r = self.rest.div_rem(&g).unwrap().0;
            (self.rest.mul(&co_l), co_l, co_r)
        };
        let cofactor = |own: &BTreeMap<QRatFun, u32>, extra: ZPolyQ| {
            poles.iter().fold(extra, |acc, (c, &m)| {
                let k = m - own.get(c).copied().unwrap_or(0);
                if k == 0 {
                    acc
                } else {
                    acc.mul(&Poly::linear_root(c).pow(k))
                }
            })
        };
        let num = self
            .num
            .mul(&cofactor(&self.poles, co_l))
            .add(&rhs.num.mul(&cofactor(&rhs.poles, co_r)));
        Self::build(num, poles, rest)
    }

    pub fn neg(&self) -> Self {
        ZRatFun {
            num: self.num.neg(),
            poles: self.poles.clone(),
            rest: self.rest.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut poles = self.poles.clone();
        for (c, &m) in &rhs.poles {
            *poles.entry(c.clone()).or_insert(0) += m;
        }
        Self::build(self.num.mul(&rhs.num), poles, self.rest.mul(&rhs.rest))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = self.num.leading().unwrap().clone();
        let rest = self.num.monic()?;
        let num = self.denominator().scale(&lead.inv()?);
        Ok(Self::build(num, BTreeMap::new(), rest))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `f(lambda * Z)` for nonzero `lambda`.
    pub fn scale_z(&self, lambda: &QRatFun) -> Result<Self> {
        let inv = lambda.inv()?;
        let stretch = |p: &ZPolyQ| {
            let mut pow = QRatFun::one();
            let mut v = Vec::with_capacity(p.coeffs().len());
            for c in p.coeffs() {
                v.push(c.mul_ref(&pow));
                pow = pow.mul_ref(lambda);
            }
            Poly::new(v)
        };
        // (lambda Z - c) = lambda (Z - c / lambda); monic rest picks up lambda^deg.
        let mut shift = self.rest.degree().unwrap_or(0) as u64;
        let mut poles = BTreeMap::new();
        for (c, &m) in &self.poles {
            poles.insert(c.mul_ref(&inv), m);
            shift += m as u64;
        }
        let rest = stretch(&self.rest).monic()?;
        let num = stretch(&self.num).scale(&inv.pow(shift));
        Ok(Self::build(num, poles, rest))
    }

    /// Value at `Z = z0`, cancelling removable singularities.
    pub fn eval_at(&self, z0: &QRatFun) -> Option<QRatFun> {
        let mut order = self.poles.get(z0).copied().unwrap_or(0) as i64;
        let mut rest = self.rest.clone();
        loop {
            let (quot, val) = rest.div_linear(z0);
            if !val.is_zero() {
                break;
            }
            rest = quot;
            order += 1;
        }
        let mut num = self.num.clone();
        while order > 0 {
            let (quot, val) = num.div_linear(z0);
            if !val.is_zero() {
                return None;
            }
            num = quot;
            order -= 1;
        }
        let mut den = rest.eval(z0);
        for (c, &m) in &self.poles {
            if c != z0 {
                den = den.mul_ref(&z0.sub_ref(c).pow(m as u64));
            }
        }
        num.eval(z0).div(&den).ok()
    }

    /// Value at `Z = q^k`.
    pub fn substitute_z(&self, k: i64) -> Result<QRatFun> {
        self.eval_at(&QRatFun::q_pow(k))
            .ok_or(Error::PoleAtEvaluation { exponent: k })
    }
}

impl PartialEq for ZRatFun {
    fn eq(&self, other: &Self) -> bool {
        if self.poles == other.poles && self.rest == other.rest {
            return self.num == other.num;
        }
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl fmt::Display for ZRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.num)?;
        for (c, m) in &self.poles {
            write!(f, " / (Z - ({}))^{}", c, m)?;
        }
        if self.rest.degree().unwrap_or(0) > 0 {
            write!(f, " / [{}]", self.rest)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ZRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZRatFun({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zc(k: i64) -> ZRatFun {
        ZRatFun::constant(QRatFun::from_int(k))
    }

    #[test]
    fn removable_singularity() {
        let z = ZRatFun::z_pow(1);
        let f = zc(1).sub(&z.mul(&z)).div(&zc(1).sub(&z)).unwrap();
        assert_eq!(f.substitute_z(0).unwrap(), QRatFun::from_int(2));
    }

    #[test]
    fn c_one_zero_pattern() {
        // (1 - Z^(1-c)) / (Z - 1) at c = 2 is 1/Z.
        let f = zc(1)
            .sub(&ZRatFun::z_pow(-1))
            .mul(&ZRatFun::pole(&QRatFun::one(), 1));
        assert_eq!(f, ZRatFun::z_pow(-1));
        assert_eq!(f.substitute_z(0).unwrap(), QRatFun::one());
    }

    #[test]
    fn true_pole() {
        let f = zc(1).div(&zc(1).sub(&ZRatFun::z_pow(1))).unwrap();
        assert_eq!(f.substitute_z(0), Err(Error::PoleAtEvaluation { exponent: 0 }));
    }

    #[test]
    fn scale_moves_poles() {
        // 1/(Z - q^2) at Z -> q^2 Z is q^-2 / (Z - 1).
        let f = ZRatFun::pole(&QRatFun::q_pow(2), 1);
        let g = f.scale_z(&QRatFun::q_pow(2)).unwrap();
        let want = ZRatFun::pole(&QRatFun::one(), 1).scale(&QRatFun::q_pow(-2));
        assert_eq!(g, want);
        assert_eq!(
            g.substitute_z(3).unwrap(),
            f.substitute_z(5).unwrap()
        );
    }
}
