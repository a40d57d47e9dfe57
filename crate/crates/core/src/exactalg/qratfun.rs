use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::zpoly::ZPoly;
use crate::algebra::{Field, Poly, Rational, Ring};
use crate::error::{Error, Result};

/// A rational function in `q` over the rationals.
///
/// Stored as a pair of integer polynomials with no common factor, whose
/// coefficient contents are jointly coprime, and whose denominator has a
/// positive leading coefficient. This makes the representation unique, so
/// derived equality and ordering are structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QRatFun {
    num: ZPoly,
    den: ZPoly,
}

impl QRatFun {
    fn from_parts(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = ZPoly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Ok(Self::fix_content(num, den))
    }

    /// Normalizes contents and sign only; callers guarantee coprimality.
    fn fix_content(num: ZPoly, den: ZPoly) -> Self {
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        if c.is_one() {
            QRatFun { num, den }
        } else {
            QRatFun {
                num: num.div_scalar(&c),
                den: den.div_scalar(&c),
            }
        }
    }

    /// `num / den` with integer coefficients listed from the constant term up.
    pub fn from_int_coeffs(num: Vec<BigInt>, den: Vec<BigInt>) -> Result<Self> {
        Self::from_parts(ZPoly::new(num), ZPoly::new(den))
    }

    pub fn from_polys(num: &Poly<Rational>, den: &Poly<Rational>) -> Result<Self> {
        let (n, dn) = clear_denominators(num);
        let (d, dd) = clear_denominators(den);
        Self::from_parts(n.scale(&dd), d.scale(&dn))
    }

    pub fn from_rational(c: &Rational) -> Self {
        Self::fix_content(
            ZPoly::constant(c.numer().clone()),
            ZPoly::constant(c.denom().clone()),
        )
    }

    pub fn from_bigint(c: BigInt) -> Self {
        QRatFun {
            num: ZPoly::constant(c),
            den: ZPoly::constant(BigInt::one()),
        }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let one = BigInt::one();
        let m = k.unsigned_abs() as usize;
        if k >= 0 {
            QRatFun {
                num: ZPoly::monomial(one.clone(), m),
                den: ZPoly::constant(one),
            }
        } else {
            QRatFun {
                num: ZPoly::constant(one.clone()),
                den: ZPoly::monomial(one, m),
            }
        }
    }

    /// Polynomial in `q` with small integer coefficients, constant term first.
    pub fn poly(coeffs: &[i64]) -> Self {
        Self::fix_content(
            ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            ZPoly::constant(BigInt::one()),
        )
    }

    pub fn numerator(&self) -> Poly<Rational> {
        let lead = self.den.lead();
        Poly::new(
            self.num
                .0
                .iter()
                .map(|c| Rational::new(c.clone(), lead.clone()))
                .collect(),
        )
    }

    /// Monic denominator.
    pub fn denominator(&self) -> Poly<Rational> {
        let lead = self.den.lead();
        Poly::new(
            self.den
                .0
                .iter()
                .map(|c| Rational::new(c.clone(), lead.clone()))
                .collect(),
        )
    }

    pub fn int_numerator(&self) -> &[BigInt] {
        &self.num.0
    }

    pub fn int_denominator(&self) -> &[BigInt] {
        &self.den.0
    }

    /// True when the value is a polynomial in `q` (denominator a constant).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Integer coefficients when the value lies in `Z[q]`.
    pub fn as_int_poly(&self) -> Option<Vec<BigInt>> {
        if self.den.is_constant() && self.den.lead().is_one() {
            Some(self.num.0.clone())
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            let n = self.num.0.first().cloned().unwrap_or_default();
            Some(Rational::new(n, self.den.lead().clone()))
        } else {
            None
        }
    }

    pub fn eval(&self, q: &Rational) -> Result<Rational> {
        let ev = |p: &ZPoly| {
            p.0.iter()
                .rev()
                .fold(<Rational as Zero>::zero(), |acc, c| acc * q + Rational::from_integer(c.clone()))
        };
        let d = ev(&self.den);
        if Zero::is_zero(&d) {
            return Err(Error::DivisionByZero);
        }
        Ok(ev(&self.num) / d)
    }

    pub fn eval_int(&self, q: i64) -> Result<Rational> {
        self.eval(&Rational::from_integer(BigInt::from(q)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::fix_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul_ref(&rhs.inv()?))
    }

    /// Canonical textual form: `num` alone when the denominator is 1,
    /// otherwise `(num) / (den)`.
    pub fn to_canonical_string(&self) -> String {
        let n = self.num.render("q");
        if self.den.is_constant() && self.den.lead().is_one() {
            n
        } else {
            format!("({}) / ({})", n, self.den.render("q"))
        }
    }
}

fn clear_denominators(p: &Poly<Rational>) -> (ZPoly, BigInt) {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    (ZPoly::new(v), l)
}

impl Ring for QRatFun {
    fn zero() -> Self {
        QRatFun {
            num: ZPoly::zero(),
            den: ZPoly::constant(BigInt::one()),
        }
    }

    fn one() -> Self {
        Self::from_bigint(BigInt::one())
    }

    fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = self.num.add(&rhs.num);
            return Self::from_parts(n, self.den.clone()).unwrap();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let (a, b) = (self.den.lead(), rhs.den.lead());
            let n = self.num.scale(b).add(&rhs.num.scale(a));
            return Self::fix_content(n, ZPoly::constant(a * b));
        }
        let g = ZPoly::gcd(&self.den, &rhs.den);
        let (bd, dd) = (
            self.den.div_exact(&g).unwrap(),
            rhs.den.div_exact(&g).unwrap(),
        );
        let n = self.num.mul(&dd).add(&rhs.num.mul(&bd));
        Self::from_parts(n, bd.mul(&rhs.den)).unwrap()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.negate())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        let g1 = ZPoly::gcd(&self.num, &rhs.den);
        let g2 = ZPoly::gcd(&rhs.num, &self.den);
        let split = |p: &ZPoly, g: &ZPoly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.div_exact(g).unwrap()
            }
        };
        let n = split(&self.num, &g1).mul(&split(&rhs.num, &g2));
        let d = split(&self.den, &g2).mul(&split(&rhs.den, &g1));
        Self::fix_content(n, d)
    }

    fn negate(&self) -> Self {
        QRatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn checked_inverse(&self) -> Result<Self> {
        self.inv()
    }
}

impl Field for QRatFun {}

impl Default for QRatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for QRatFun {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&QRatFun> for &QRatFun {
            type Output = QRatFun;
            fn $m(self, rhs: &QRatFun) -> QRatFun {
                self.$inner(rhs)
            }
        }
        impl $tr<QRatFun> for QRatFun {
            type Output = QRatFun;
            fn $m(self, rhs: QRatFun) -> QRatFun {
                self.$inner(&rhs)
            }
        }
        impl $tr<&QRatFun> for QRatFun {
            type Output = QRatFun;
            fn $m(self, rhs: &QRatFun) -> QRatFun {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for QRatFun {
    type Output = QRatFun;
    fn neg(self) -> QRatFun {
        self.negate()
    }
}

impl Neg for &QRatFun {
    type Output = QRatFun;
    fn neg(self) -> QRatFun {
        self.negate()
    }
}

impl fmt::Display for QRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for QRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRatFun({})", self)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    num: Vec<serde_json::Number>,
    den: Vec<serde_json::Number>,
}

fn to_wire(c: &[BigInt]) -> Vec<serde_json::Number> {
    c.iter()
        .map(|x| serde_json::Number::from_str(&x.to_string()).expect("integer literal"))
        .collect()
}

fn from_wire(c: &[serde_json::Number]) -> std::result::Result<Vec<BigInt>, String> {
    c.iter()
        .map(|x| BigInt::from_str(&x.to_string()).map_err(|e| format!("{x}: {e}")))
        .collect()
}

impl Serialize for QRatFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            num: to_wire(&self.num.0),
            den: to_wire(&self.den.0),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QRatFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let num = from_wire(&w.num).map_err(D::Error::custom)?;
        let den = from_wire(&w.den).map_err(D::Error::custom)?;
        QRatFun::from_int_coeffs(num, den).map_err(D::Error::custom)
    }
}

impl QRatFun {
    /// Exponent `k` when the value is exactly `q^k`.
    pub fn monomial_exponent(&self) -> Option<i64> {
        let single = |p: &ZPoly| {
            let k = p.low_order();
            (p.0.len() == k + 1 && p.lead().is_one()).then_some(k as i64)
        };
        Some(single(&self.num)? - single(&self.den)?)
    }

    /// Degree of the numerator minus the degree of the denominator.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.as_int_poly()?.iter().map(ToPrimitive::to_i64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(k: i64) -> QRatFun {
        QRatFun::q_pow(k)
    }

    fn one() -> QRatFun {
        QRatFun::one()
    }

    #[test]
    fn geometric_factorization() {
        let a = one() - qi(-4);
        let b = one() - qi(-2);
        assert_eq!(a.div(&b).unwrap(), one() + qi(-2));
    }

    #[test]
    fn cancels_to_one() {
        let a = QRatFun::poly(&[-1, 1]);
        assert_eq!(a.div(&a).unwrap(), one());
    }

    #[test]
    fn single_factor_product() {
        let v = (one() - qi(-1)).div(&(one() - qi(-2))).unwrap();
        assert_eq!(v, one().div(&(one() + qi(-1))).unwrap());
    }

    #[test]
    fn divide_by_zero() {
        assert_eq!(one().div(&QRatFun::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(QRatFun::poly(&[2, 1]).to_string(), "q + 2");
        assert_eq!((one() + qi(-2)).to_string(), "(q^2 + 1) / (q^2)");
        assert_eq!(QRatFun::from_rational(&crate::algebra::rat(-3, 6)).to_string(), "(-1) / (2)");
    }

    #[test]
    fn json_roundtrip() {
        let v = (one() - qi(-1) - qi(-2)).div(&(one() - qi(-2))).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"num":[-1,-1,1],"den":[-1,0,1]}"#);
        let back: QRatFun = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<QRatFun>(r#"{"num":[1],"den":[1],"x":1}"#).is_err());
    }

    #[test]
    fn public_polys_are_monic_denominator() {
        let v = QRatFun::from_int_coeffs(
            vec![BigInt::from(2)],
            vec![BigInt::from(4), BigInt::from(6)],
        )
        .unwrap();
        assert!(v.denominator().is_monic());
        let back = QRatFun::from_polys(&v.numerator(), &v.denominator()).unwrap();
        assert_eq!(back, v);
    }
}
