//! Column Hermite normal form for lattices `t^N O^n ⊆ Λ ⊆ O^n` over
//! `O = F[[t]]`, computed in `(F[t]/(t^N))^n`.
//!
//! The basis is upper triangular: column `j` has `t^{a_j}` on the diagonal,
//! zeros below, and above-diagonal entries in row `i` reduced to degree
//! `< a_i`. This form is unique, so it doubles as a dictionary key.

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::localring::{FiniteField, TruncSeries, Valuation};

type S<F> = TruncSeries<F>;

#[derive(Clone, Debug)]
pub struct Hnf<F: FiniteField> {
    prec: usize,
    diag: Vec<usize>,
    /// Column-major basis, `cols[j][i]`.
    cols: Vec<Vec<S<F>>>,
}

/// Any representative at full precision; the lost digits are covered by the
/// `t^prec` part of the lattice.
fn lift<F: FiniteField>(x: &S<F>, prec: usize) -> S<F> {
    S::new(x.coeffs().to_vec(), prec)
}

fn val<F: FiniteField>(x: &S<F>) -> Option<usize> {
    match x.valuation() {
        Valuation::Finite(v) => Some(v),
        Valuation::AtLeast(_) => None,
    }
}

/// Split `x = t^k * u + r` with `deg r < k`; returns `(u, r)`.
fn split_at<F: FiniteField>(x: &S<F>, k: usize, prec: usize) -> (S<F>, S<F>) {
    let low: Vec<F> = (0..k).map(|i| x.coeff(i)).collect();
    let high: Vec<F> = x.coeffs().iter().skip(k).copied().collect();
    (S::new(high, prec), S::new(low, prec))
}

impl<F: FiniteField> Hnf<F> {
    /// Hermite form of the span of `gens` together with `t^prec O^n`.
    pub fn from_generators(n: usize, gens: &[Vec<S<F>>], prec: usize) -> Self {
        let mut pool: Vec<Vec<S<F>>> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| {
                        debug_assert!(x.prec() >= prec, "generator known to fewer digits");
                        lift(x, prec)
                    })
                    .collect()
            })
            .collect();
        let mut pivots: Vec<Option<Vec<S<F>>>> = vec![None; n];
        let mut diag = vec![prec; n];
        for r in (0..n).rev() {
            let best = pool
                .iter()
                .enumerate()
                .filter_map(|(k, g)| val(&g[r]).map(|v| (v, k)))
                .min();
            let Some((v, k)) = best else { continue };
            let mut p = pool.swap_remove(k);
            let unit = lift(&p[r].unshift(v).expect("valuation"), prec);
            let unit_inv = unit.checked_inverse().expect("unit");
            for x in p.iter_mut() {
                *x = x.mul_ref(&unit_inv);
            }
            for g in pool.iter_mut() {
                if !g[r].is_zero() {
                    let f = lift(&g[r].unshift(v).expect("v is minimal"), prec);
                    for i in 0..=r {
                        g[i] = g[i].sub_ref(&f.mul_ref(&p[i]));
                    }
                }
            }
            // t^(prec - v) p dies in row r but survives above it.
            if v > 0 {
                let shadow: Vec<S<F>> = p.iter().map(|x| x.shift(prec - v).with_prec(prec)).collect();
                pool.push(shadow);
            }
            pool.retain(|g| g.iter().any(|x| !x.is_zero()));
            diag[r] = v;
            pivots[r] = Some(p);
        }
        let mut cols: Vec<Vec<S<F>>> = (0..n)
            .map(|j| {
                pivots[j].clone().unwrap_or_else(|| {
                    let mut c = vec![S::new(Vec::new(), prec); n];
                    c[j] = S::monomial(F::one(), prec, prec);
                    c
                })
            })
            .collect();
        for j in 0..n {
            for x in cols[j].iter_mut().skip(j + 1) {
                *x = S::new(Vec::new(), prec);
            }
            cols[j][j] = S::monomial(F::one(), diag[j], prec);
        }
        let mut h = Hnf { prec, diag, cols };
        h.reduce();
        h
    }

    fn reduce(&mut self) {
        let n = self.diag.len();
        for j in 0..n {
            for i in (0..j).rev() {
                let (q, _) = split_at(&self.cols[j][i], self.diag[i], self.prec);
                if q.is_zero() {
                    continue;
                }
                let ci = self.cols[i].clone();
                for (r, c) in ci.iter().enumerate().take(i + 1) {
                    self.cols[j][r] = self.cols[j][r].sub_ref(&q.mul_ref(c));
                }
            }
        }
    }

    /// Builds an upper triangular basis directly (entries are reduced here).
    pub fn from_upper(diag: Vec<usize>, upper: &[(usize, usize, S<F>)], prec: usize) -> Self {
        let n = diag.len();
        let mut cols: Vec<Vec<S<F>>> = (0..n)
            .map(|j| {
                let mut c = vec![S::new(Vec::new(), prec); n];
                c[j] = S::monomial(F::one(), diag[j], prec);
                c
            })
            .collect();
        for (i, j, x) in upper {
            assert!(i < j, "entry below the diagonal");
            cols[*j][*i] = lift(x, prec);
        }
        let mut h = Hnf { prec, diag, cols };
        h.reduce();
        h
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn diag(&self) -> &[usize] {
        &self.diag
    }

    pub fn columns(&self) -> &[Vec<S<F>>] {
        &self.cols
    }

    /// `sum a_j`, the colength in `O^n`.
    pub fn colength(&self) -> usize {
        self.diag.iter().sum()
    }

    /// Whether the lattice is all of `t^prec`-saturated, i.e. some diagonal
    /// exponent reached the working precision.
    pub fn touches_precision(&self) -> bool {
        self.diag.iter().any(|&a| a >= self.prec)
    }

    /// Least `d` with `t^d O^n ⊆ Λ`.
    pub fn depth(&self) -> usize {
        let n = self.dim();
        let mut d = 0;
        for k in 0..n {
            // t^d e_k must lie in Λ; walk the back-substitution with symbolic d.
            d = d.max(self.needed_power(k));
        }
        d
    }

    fn needed_power(&self, k: usize) -> usize {
        let mut best = self.diag[k];
        loop {
            let mut e = vec![S::new(Vec::new(), self.prec); self.dim()];
            e[k] = S::monomial(F::one(), best, self.prec);
            if self.contains(&e) {
                return best;
            }
            best += 1;
        }
    }

    /// Smallest valuation among all basis entries.
    pub fn min_valuation(&self) -> usize {
        self.cols
            .iter()
            .flatten()
            .filter_map(val)
            .min()
            .unwrap_or(self.prec)
    }

    /// Coordinates of `w` in the basis, if `w ∈ Λ` (tested modulo `t^prec`).
    pub fn coords(&self, w: &[S<F>]) -> Option<Vec<S<F>>> {
        let n = self.dim();
        let mut w: Vec<S<F>> = w.iter().map(|x| lift(x, self.prec)).collect();
        let mut c = vec![S::new(Vec::new(), self.prec); n];
        for r in (0..n).rev() {
            let a = self.diag[r];
            let (q, rem) = split_at(&w[r], a, self.prec);
            if !rem.is_zero() {
                return None;
            }
            for i in 0..=r {
                w[i] = w[i].sub_ref(&q.mul_ref(&self.cols[r][i]));
            }
            c[r] = q;
        }
        Some(c)
    }

    pub fn contains(&self, w: &[S<F>]) -> bool {
        self.coords(w).is_some()
    }

    pub fn contains_lattice(&self, other: &Hnf<F>) -> bool {
        other.cols.iter().all(|c| self.contains(c))
    }

    /// `t^{-k} Λ`; every entry must be divisible by `t^k`.
    pub fn divide_by_t(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let prec = self.prec - k;
        let mut cols = Vec::with_capacity(self.dim());
        for c in &self.cols {
            let mut nc = Vec::with_capacity(c.len());
            for x in c {
                nc.push(lift(&x.unshift(k).map_err(|_| Error::InsufficientPrecision)?, prec));
            }
            cols.push(nc);
        }
        Ok(Hnf::from_generators(self.dim(), &cols, prec))
    }

    /// The same lattice described at a lower precision (still containing `t^prec O^n`).
    pub fn at_prec(&self, prec: usize) -> Self {
        Hnf::from_generators(self.dim(), &self.cols, prec)
    }

    /// Canonical encoding: diagonal exponents, then the reduced entries.
    pub fn key(&self) -> Vec<u32> {
        let n = self.dim();
        let mut k: Vec<u32> = self.diag.iter().map(|&a| a as u32).collect();
        for j in 0..n {
            for i in 0..j {
                for d in 0..self.diag[i].min(self.prec) {
                    k.push(self.cols[j][i].coeff(d).index() as u32);
                }
            }
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::Fp;

    type T = S<Fp<3>>;
    const N: usize = 6;

    fn s(c: &[i64]) -> T {
        T::new(c.iter().map(|&x| Fp::from_int(x)).collect(), N)
    }

    #[test]
    fn simple_forms() {
        // span of (t, 1) and (0, t^2) in O^2
        let h = Hnf::from_generators(2, &[vec![s(&[0, 1]), s(&[1])], vec![s(&[]), s(&[0, 0, 1])]], N);
        assert_eq!(h.diag(), &[3, 0]);
        assert!(h.contains(&[s(&[0, 1]), s(&[1])]));
        assert!(!h.contains(&[s(&[1]), s(&[])]));
        assert_eq!(h.depth(), 3);
        assert_eq!(h.colength(), 3);
    }

    #[test]
    fn key_is_canonical() {
        let g1 = vec![vec![s(&[0, 1]), s(&[1, 1])], vec![s(&[0, 0, 1]), s(&[])]];
        let g2 = vec![vec![s(&[0, 2]), s(&[2, 2])], vec![s(&[0, 1, 1]), s(&[1, 1])]];
        let (a, b) = (Hnf::from_generators(2, &g1, N), Hnf::from_generators(2, &g2, N));
        assert!(a.contains_lattice(&b) && b.contains_lattice(&a));
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn shadow_generators_are_kept() {
        // (t^(N-1), 1): its multiple t * (t^(N-1), 1) = (0, t) has to survive.
        let g = vec![vec![s(&[0, 0, 0, 0, 0, 1]), s(&[1])]];
        let h = Hnf::from_generators(2, &g, N);
        assert_eq!(h.diag(), &[N, 0]);
        let mut e = vec![s(&[]), s(&[0, 1])];
        e[1] = s(&[0, 1]);
        // (0, t) = t * g - (t^N, 0) and t^N vanishes.
        assert!(h.contains(&e));
    }
}
