use std::fmt;

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};

/// Finite fields small enough to list.
pub trait FiniteField: Field + Copy + Eq + Ord + std::hash::Hash {
    const ORDER: u64;
    const CHARACTERISTIC: u64;

    /// Bijection `0..ORDER -> field`, with `0 -> zero` and `1 -> one`.
    fn from_index(i: u64) -> Self;
    fn index(&self) -> u64;

    fn elements() -> Vec<Self> {
        (0..Self::ORDER).map(Self::from_index).collect()
    }
}

const fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// The prime field `F_P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub const fn value(self) -> u64 {
        self.0
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_int(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
    fn negate(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn checked_inverse(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fp(pow_mod(self.0, P - 2, P)))
    }
}

impl<const P: u64> Field for Fp<P> {}

impl<const P: u64> FiniteField for Fp<P> {
    const ORDER: u64 = P;
    const CHARACTERISTIC: u64 = P;
    fn from_index(i: u64) -> Self {
        Fp(i % P)
    }
    fn index(&self) -> u64 {
        self.0
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coefficients `(c0, c1)` of the defining relation `w^2 = c0 + c1 w`.
/// Characteristic 2 uses `w^2 = w + 1`; odd characteristic adjoins the square
/// root of the least quadratic nonresidue.
const fn defining_relation(p: u64) -> (u64, u64) {
    if p == 2 {
        return (1, 1);
    }
    let mut n = 2;
    while n < p {
        if pow_mod(n, (p - 1) / 2, p) == p - 1 {
            return (n, 0);
        }
        n += 1;
    }
    panic!("no quadratic nonresidue")
}

/// The quadratic extension `F_{P^2} = F_P[w]`, element `a + b w`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq2<const P: u64> {
    a: u64,
    b: u64,
}

impl<const P: u64> Fq2<P> {
    const REL: (u64, u64) = defining_relation(P);

    pub const fn new(a: u64, b: u64) -> Self {
        Fq2 { a: a % P, b: b % P }
    }

    pub fn generator() -> Self {
        Fq2 { a: 0, b: 1 % P }
    }

    pub const fn parts(self) -> (u64, u64) {
        (self.a, self.b)
    }

    /// Field norm down to `F_P`.
    fn norm(&self) -> u64 {
        // N(a + b w) = (a + b w)(a + b w') with w + w' = c1, w w' = -c0.
        let (c0, c1) = Self::REL;
        let (a, b) = (self.a, self.b);
        let t = a * a % P + a * b % P * c1 % P;
        (t + P - b * b % P * c0 % P) % P
    }

    fn conjugate(&self) -> Self {
        // w' = c1 - w
        let (_, c1) = Self::REL;
        Fq2::new(self.a + self.b * c1, P - self.b)
    }
}

impl<const P: u64> Ring for Fq2<P> {
    fn zero() -> Self {
        Fq2 { a: 0, b: 0 }
    }
    fn one() -> Self {
        Fq2 { a: 1 % P, b: 0 }
    }
    fn from_int(n: i64) -> Self {
        Fq2 {
            a: n.rem_euclid(P as i64) as u64,
            b: 0,
        }
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Fq2::new(self.a + rhs.a, self.b + rhs.b)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Fq2::new(self.a + P - rhs.a, self.b + P - rhs.b)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let (c0, c1) = Self::REL;
        let bb = self.b * rhs.b % P;
        let a = self.a * rhs.a % P + bb * c0 % P;
        let b = self.a * rhs.b % P + self.b * rhs.a % P + bb * c1 % P;
        Fq2::new(a, b)
    }
    fn negate(&self) -> Self {
        Fq2::new(P - self.a, P - self.b)
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn checked_inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n_inv = pow_mod(self.norm(), P - 2, P);
        let c = self.conjugate();
        Ok(Fq2::new(c.a * n_inv, c.b * n_inv))
    }
}

impl<const P: u64> Field for Fq2<P> {}

impl<const P: u64> FiniteField for Fq2<P> {
    const ORDER: u64 = P * P;
    const CHARACTERISTIC: u64 = P;
    fn from_index(i: u64) -> Self {
        Fq2::new(i % P, i / P % P)
    }
    fn index(&self) -> u64 {
        self.a + P * self.b
    }
}

impl<const P: u64> fmt::Debug for Fq2<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w", self.a, self.b)
    }
}

impl<const P: u64> fmt::Display for Fq2<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field<F: FiniteField>() {
        let els = F::elements();
        assert_eq!(els.len() as u64, F::ORDER);
        for x in &els {
            assert_eq!(F::from_index(x.index()), *x);
            if !x.is_zero() {
                assert!(x.mul_ref(&x.checked_inverse().unwrap()).is_one());
            }
        }
        // no zero divisors
        for x in &els {
            for y in &els {
                if !x.is_zero() && !y.is_zero() {
                    assert!(!x.mul_ref(y).is_zero());
                }
            }
        }
    }

    #[test]
    fn fields_are_fields() {
        check_field::<Fp<2>>();
        check_field::<Fp<5>>();
        check_field::<Fq2<2>>();
        check_field::<Fq2<3>>();
        check_field::<Fq2<5>>();
    }
}
