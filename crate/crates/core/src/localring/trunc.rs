use std::fmt;

use crate::algebra::Ring;
use crate::error::{Error, Result};

/// Precision marker for values known exactly (constants such as `0` and `1`).
pub const EXACT: usize = usize::MAX;

/// Valuation of a truncated series.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(usize),
    /// Every tracked coefficient vanishes.
    AtLeast(usize),
}

impl Valuation {
    pub fn finite(self) -> Result<usize> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::AtLeast(_) => Err(Error::InsufficientPrecision),
        }
    }
}

/// An element of `F[t]/(t^N)`, the valuation ring `F[[t]]` known to precision `N`.
///
/// Operations return the smaller precision of their inputs, so a result
/// never claims digits its inputs did not determine.
#[derive(Clone)]
pub struct TruncSeries<F> {
    coeffs: Vec<F>,
    prec: usize,
}

impl<F: Ring> TruncSeries<F> {
    pub fn new(mut coeffs: Vec<F>, prec: usize) -> Self {
        coeffs.truncate(prec);
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        TruncSeries { coeffs, prec }
    }

    pub fn constant(c: F, prec: usize) -> Self {
        Self::new(vec![c], prec)
    }

    /// `c t^k` at precision `prec`.
    pub fn monomial(c: F, k: usize, prec: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Self::new(v, prec)
    }

    pub fn t(prec: usize) -> Self {
        Self::monomial(F::one(), 1, prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Self::new(self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::AtLeast(self.prec),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        let prec = self.prec.saturating_add(k);
        Self::new(v, prec)
    }

    /// Divide by `t^k`, which must divide at the tracked precision; the result
    /// loses `k` digits.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(Error::NotInvertible);
        }
        if self.prec != EXACT && self.prec < k {
            return Err(Error::InsufficientPrecision);
        }
        let prec = if self.prec == EXACT { EXACT } else { self.prec - k };
        Ok(Self::new(self.coeffs.iter().skip(k).cloned().collect(), prec))
    }
}

impl<F: Ring> Ring for TruncSeries<F> {
    fn zero() -> Self {
        TruncSeries {
            coeffs: Vec::new(),
            prec: EXACT,
        }
    }

    fn one() -> Self {
        Self::new(vec![F::one()], EXACT)
    }

    fn from_int(n: i64) -> Self {
        Self::new(vec![F::from_int(n)], EXACT)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let n = self.coeffs.len().max(rhs.coeffs.len()).min(prec);
        let v = (0..n).map(|i| self.coeff(i).add_ref(&rhs.coeff(i))).collect();
        Self::new(v, prec)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let n = self.coeffs.len().max(rhs.coeffs.len()).min(prec);
        let v = (0..n).map(|i| self.coeff(i).sub_ref(&rhs.coeff(i))).collect();
        Self::new(v, prec)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        // A known zero factor can still only vouch for the other side's digits.
        let prec = self.prec.min(rhs.prec);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(Vec::new(), prec);
        }
        let n = (self.coeffs.len() + rhs.coeffs.len() - 1).min(prec);
        let mut v = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(v, prec)
    }

    fn negate(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(Ring::negate).collect(),
            prec: self.prec,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn checked_inverse(&self) -> Result<Self> {
        match self.valuation() {
            Valuation::AtLeast(0) => return Err(Error::InsufficientPrecision),
            Valuation::AtLeast(_) | Valuation::Finite(1..) => return Err(Error::NotInvertible),
            Valuation::Finite(0) => {}
        }
        let c0inv = self.coeffs[0].checked_inverse()?;
        if self.prec == EXACT {
            if self.coeffs.len() == 1 {
                return Ok(Self::new(vec![c0inv], EXACT));
            }
            return Err(Error::InsufficientPrecision);
        }
        // b_k = -c0^{-1} sum_{j=1..k} a_j b_{k-j}
        let n = self.prec;
        let mut b: Vec<F> = Vec::with_capacity(n);
        b.push(c0inv.clone());
        for k in 1..n {
            let mut s = F::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = s.add_ref(&self.coeffs[j].mul_ref(&b[k - j]));
            }
            b.push(s.mul_ref(&c0inv).negate());
        }
        Ok(Self::new(b, n))
    }
}

/// Equality of the digits both sides determine.
impl<F: Ring> PartialEq for TruncSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.prec.min(other.prec);
        let m = self.coeffs.len().max(other.coeffs.len()).min(n);
        (0..m).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl<F: Ring + fmt::Display> fmt::Display for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if self.prec != EXACT {
            parts.push(format!("O(t^{})", self.prec));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl<F: Ring> fmt::Debug for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(t^{})", self.coeffs, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::Fp;

    type S = TruncSeries<Fp<3>>;

    fn s(c: &[i64], n: usize) -> S {
        S::new(c.iter().map(|&x| Fp::<3>::from_int(x)).collect(), n)
    }

    #[test]
    fn valuations() {
        assert_eq!(s(&[0, 1, 0, 1], 5).valuation(), Valuation::Finite(1));
        assert_eq!(s(&[], 5).valuation(), Valuation::AtLeast(5));
        assert_eq!(s(&[1, 1], 5).valuation(), Valuation::Finite(0));
    }

    #[test]
    fn inverse_of_unit() {
        let x = s(&[1, 1], 6);
        let y = x.checked_inverse().unwrap();
        assert_eq!(x.mul_ref(&y), S::one());
        assert_eq!(y, s(&[1, -1, 1, -1, 1, -1], 6));
        assert_eq!(s(&[0, 1], 6).checked_inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn precision_is_the_minimum() {
        let x = s(&[1, 2, 1], 3).add_ref(&s(&[0, 0, 0, 1], 5));
        assert_eq!(x.prec(), 3);
        let y = s(&[0, 1], 4).mul_ref(&s(&[0, 0, 1], 4));
        assert_eq!(y.valuation(), Valuation::Finite(3));
        assert_eq!(s(&[0, 1], 4).mul_ref(&s(&[0, 0, 0, 1], 4)).valuation(), Valuation::AtLeast(4));
    }
}
