use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::QRatFun;
use crate::algebra::{Rational, Ring};
use crate::error::{Error, Result};

/// Polynomial in `T = -q^(2s)` with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default, Serialize)]
pub struct TPoly {
    coeffs: BTreeMap<u32, QRatFun>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: QRatFun, m: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Monomial with a signed exponent; negative exponents signal a bad cell.
    pub fn checked_monomial(c: QRatFun, m: i64) -> Result<Self> {
        let e = u32::try_from(m).map_err(|_| Error::NegativeExponent(m))?;
        Ok(Self::monomial(c, e))
    }

    pub fn from_coeffs(cs: impl IntoIterator<Item = QRatFun>) -> Self {
        let mut p = Self::zero();
        for (m, c) in cs.into_iter().enumerate() {
            p.add_term(m as u32, c);
        }
        p
    }

    pub fn add_term(&mut self, m: u32, c: QRatFun) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_insert_with(QRatFun::zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn coeff(&self, m: u32) -> QRatFun {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &QRatFun)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &rhs.coeffs {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|(&m, c)| (m, c.negate())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                out.add_term(i + j, a.mul_ref(b));
            }
        }
        out
    }

    pub fn scale(&self, c: &QRatFun) -> Self {
        let mut out = Self::zero();
        for (&m, a) in &self.coeffs {
            out.add_term(m, a.mul_ref(c));
        }
        out
    }

    pub fn eval(&self, t: &QRatFun) -> QRatFun {
        self.coeffs
            .iter()
            .fold(QRatFun::zero(), |acc, (&m, c)| acc.add_ref(&c.mul_ref(&t.pow(m as u64))))
    }

    /// `T^n P(1/T)`; `n` must be at least the degree.
    pub fn reverse(&self, n: u32) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|(&m, c)| (n - m, c.clone())).collect(),
        }
    }

    pub fn is_palindromic(&self, n: u32) -> bool {
        self.degree().is_none_or(|d| d <= n) && self.reverse(n) == *self
    }

    /// Coefficients with `q` replaced by a number, dense from `T^0`.
    pub fn substitute_q(&self, q: &Rational) -> Result<Vec<Rational>> {
        let len = self.degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![<Rational as Ring>::zero(); len];
        for (&m, c) in &self.coeffs {
            out[m as usize] = c.eval(q)?;
        }
        Ok(out)
    }
}

/// The normalized derivative at `s = 0`: `sum m (-1)^m c_m`.
pub fn dq_statistic(p: &TPoly) -> QRatFun {
    p.terms().fold(QRatFun::zero(), |acc, (m, c)| {
        let w = if m % 2 == 0 { m as i64 } else { -(m as i64) };
        acc.add_ref(&c.mul_ref(&QRatFun::from_int(w)))
    })
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&m, c)| match m {
                0 => format!("({c})"),
                1 => format!("({c})*T"),
                _ => format!("({c})*T^{m}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(cs: &[i64]) -> TPoly {
        TPoly::from_coeffs(cs.iter().map(|&c| QRatFun::from_int(c)))
    }

    #[test]
    fn statistic_small_cases() {
        assert_eq!(dq_statistic(&t(&[1, 1])), QRatFun::from_int(-1));
        assert_eq!(dq_statistic(&t(&[0, 0, 1])), QRatFun::from_int(2));
        let q = QRatFun::q();
        let p = t(&[1, 1, 1, 1]).add(&t(&[1, 2, 2, 1]).scale(&q));
        assert_eq!(dq_statistic(&p), QRatFun::poly(&[-2, -1]));
    }

    #[test]
    fn negative_exponent_rejected() {
        assert_eq!(
            TPoly::checked_monomial(QRatFun::one(), -1),
            Err(Error::NegativeExponent(-1))
        );
    }

    #[test]
    fn palindrome() {
        assert!(t(&[3, 5, 5, 3]).is_palindromic(3));
        assert!(!t(&[3, 5, 4, 3]).is_palindromic(3));
    }
}
