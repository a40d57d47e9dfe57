//! Integer polynomials in `q`: the storage format under [`QRatFun`].
//!
//! GCDs use the heuristic evaluate/interpolate method with a divisibility
//! check, falling back to a primitive remainder sequence.
//!
//! [`QRatFun`]: super::QRatFun

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub(crate) struct ZPoly(pub(crate) Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.0.last().expect("lead of zero polynomial")
    }

    /// Multiplicity of `q` as a factor.
    pub fn low_order(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.0.get(i), o.0.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            });
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        ZPoly(v)
    }

    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.low_order() >= k);
        ZPoly(self.0[k..].to_vec())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide every coefficient exactly by `c`.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        ZPoly(self.0.iter().map(|a| a / c).collect())
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn max_norm(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in `Z[q]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.0.len();
        if n <= dd {
            return None;
        }
        let lead = d.lead();
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); n - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &qc * dc;
            }
            quot[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quot))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lead = d.lead().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.lead().clone();
            let shifted = d.shift(rd - dd).scale(&top);
            rem = rem.scale(&lead).sub(&shifted);
        }
        rem
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        // q-power part separately: cheap and very common here.
        let k = a.low_order().min(b.low_order());
        let (a, b) = (a.unshift(a.low_order()), b.unshift(b.low_order()));
        let core = if a.is_constant() || b.is_constant() {
            ZPoly::constant(BigInt::one())
        } else {
            let (pa, pb) = (a.primitive(), b.primitive());
            if pa == pb {
                pa
            } else {
                heuristic_gcd(&pa, &pb).unwrap_or_else(|| prs_gcd(&pa, &pb))
            }
        };
        core.shift(k)
    }
}

fn interpolate(mut h: BigInt, x: &BigInt) -> ZPoly {
    let half = x >> 1;
    let mut out = Vec::new();
    while !h.is_zero() {
        let mut c = h.mod_floor(x);
        if c > half {
            c -= x;
        }
        h = (h - &c) / x;
        out.push(c);
    }
    ZPoly::new(out)
}

/// Both inputs primitive, nonconstant, positive leading coefficient.
fn heuristic_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let norm = a.max_norm().min(b.max_norm());
    let mut x: BigInt = norm * 2u32 + 29u32;
    for _ in 0..8 {
        let (ea, eb) = (a.eval(&x), b.eval(&x));
        if !ea.is_zero() && !eb.is_zero() {
            let g = ea.gcd(&eb);
            let cand = interpolate(g, &x).primitive();
            if !cand.is_zero() && a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return Some(cand);
            }
        }
        x = &x * 3u32 + 7u32;
    }
    None
}

fn prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).primitive();
        a = b;
        b = r;
    }
    a.primitive()
}

impl ZPoly {
    /// Human-readable form in the variable `q`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match i {
                0 => s.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        s.push_str(&mag.to_string());
                        s.push('*');
                    }
                    s.push_str(var);
                    if i > 1 {
                        s.push('^');
                        s.push_str(&i.to_string());
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn gcd_finds_cyclotomic_factor() {
        // (q^2 - 1)(q + 3) and (q^2 - 1)(2q - 5)
        let f = z(&[-1, 0, 1]);
        let a = f.mul(&z(&[3, 1]));
        let b = f.mul(&z(&[-5, 2]));
        assert_eq!(ZPoly::gcd(&a, &b), f);
        assert_eq!(prs_gcd(&a.primitive(), &b.primitive()), f);
    }

    #[test]
    fn gcd_handles_q_powers() {
        let a = z(&[0, 0, 0, 1, 1]);
        let b = z(&[0, 0, 2]);
        assert_eq!(ZPoly::gcd(&a, &b), z(&[0, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = z(&[-1, 0, 0, 0, 1]);
        assert_eq!(a.div_exact(&z(&[1, 0, 1])), Some(z(&[-1, 0, 1])));
        assert_eq!(a.div_exact(&z(&[1, 1, 1])), None);
    }

    #[test]
    fn render_signs() {
        assert_eq!(z(&[2, 1]).render("q"), "q + 2");
        assert_eq!(z(&[-3, -1, 0, 2]).render("q"), "2*q^3 - q - 3");
    }
}
