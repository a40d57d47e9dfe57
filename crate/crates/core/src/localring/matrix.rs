use std::fmt;

use crate::algebra::{Poly, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, PartialEq)]
pub struct RingMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> RingMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn scalar(n: usize, c: R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RingMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RingMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(entries: &[R]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { R::zero() })
    }

    /// `[[a, b], [c, d]]` with square blocks of equal size.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (h, w) = (a.rows, a.cols);
        Self::from_fn(h + c.rows, w + b.cols, |i, j| match (i < h, j < w) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - w).clone(),
            (false, true) => c.get(i - h, j).clone(),
            (false, false) => d.get(i - h, j - w).clone(),
        })
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> RingMatrix<S> {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, R::add_ref)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, R::sub_ref)
    }

    pub fn neg(&self) -> Self {
        self.map(R::negate)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(R::zero(), |acc, i| acc.add_ref(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<R>) -> Self {
        let n = self.rows;
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zeros(n, n), |acc, c| acc.mul(self).add(&Self::scalar(n, c.clone())))
    }

    /// Characteristic polynomial `det(X I - A)` by Berkowitz's division-free
    /// algorithm, so it is valid over any commutative ring.
    pub fn charpoly(&self) -> Poly<R> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        // Coefficients in descending order.
        let mut c: Vec<R> = vec![R::one()];
        for r in 0..n {
            // Leading (r+1)x(r+1) block: A_r, column S, row R, corner a.
            let a = self.get(r, r).clone();
            let mut col: Vec<R> = vec![R::one(), a.negate()];
            let mut s: Vec<R> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rs = (0..r).fold(R::zero(), |acc, j| acc.add_ref(&self.get(r, j).mul_ref(&s[j])));
                col.push(rs.negate());
                s = (0..r)
                    .map(|i| {
                        (0..r).fold(R::zero(), |acc, j| acc.add_ref(&self.get(i, j).mul_ref(&s[j])))
                    })
                    .collect();
            }
            let next: Vec<R> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(R::zero(), |acc, j| acc.add_ref(&col[i - j].mul_ref(&c[j])))
                })
                .collect();
            c = next;
        }
        c.reverse();
        Poly::new(c)
    }

    pub fn det(&self) -> R {
        let c0 = self.charpoly().coeff(0);
        if self.rows.is_multiple_of(2) {
            c0
        } else {
            c0.negate()
        }
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots.
    ///
    /// Over a local ring a square matrix is invertible exactly when every
    /// elimination column offers a unit, so the absence of one proves
    /// non-invertibility unless some candidate's unit status was undecidable.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut pivot = None;
            let mut undecided = false;
            for r in col..n {
                match a.get(r, col).checked_inverse() {
                    Ok(u) => {
                        pivot = Some((r, u));
                        break;
                    }
                    Err(Error::InsufficientPrecision) => undecided = true,
                    Err(_) => {}
                }
            }
            let Some((p, u)) = pivot else {
                return Err(if undecided {
                    Error::InsufficientPrecision
                } else {
                    Error::NotInvertible
                });
            };
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            a.scale_row(col, &u);
            inv.scale_row(col, &u);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &f.negate());
                    inv.add_row_multiple(r, col, &f.negate());
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, u: &R) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            self.data[idx] = self.data[idx].mul_ref(u);
        }
    }

    /// `row[dst] += f * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &R) {
        for c in 0..self.cols {
            let v = self.get(src, c).mul_ref(f);
            let idx = dst * self.cols + c;
            self.data[idx] = self.data[idx].add_ref(&v);
        }
    }
}

/// Resultant as the determinant of the Sylvester matrix.
pub fn resultant<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> R {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    if m + n == 0 {
        return R::one();
    }
    let size = m + n;
    let mut s = RingMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    s.det()
}

impl<R: Ring + fmt::Display> fmt::Display for RingMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<R: fmt::Debug> fmt::Debug for RingMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Rational};
    use crate::localring::{Fp, TruncSeries};

    fn qm(rows: &[&[i64]]) -> RingMatrix<Rational> {
        RingMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    fn qp(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(qm(&[&[1, 0], &[0, 0]]).charpoly(), qp(&[0, -1, 1]));
        // companion of X^2 - 3X + 5
        assert_eq!(qm(&[&[0, -5], &[1, 3]]).charpoly(), qp(&[5, -3, 1]));
        let a = qm(&[&[2, 1, 0], &[1, 3, 4], &[0, 5, -1]]);
        assert_eq!(a.det(), rat(2 * (-3 - 20) - (-1), 1));
        assert!(a.eval_poly(&a.charpoly()).is_zero());
    }

    #[test]
    fn charpoly_over_truncated_series() {
        type S = TruncSeries<Fp<2>>;
        let t = S::t(3);
        let a = RingMatrix::from_rows(vec![vec![S::zero(), t.clone()], vec![S::one(), S::zero()]]);
        let cp = a.charpoly();
        assert_eq!(cp, Poly::new(vec![t.negate(), S::zero(), S::one()]));
    }

    #[test]
    fn inverse_examples() {
        type S = TruncSeries<Fp<3>>;
        let t = S::t(4);
        let a = RingMatrix::from_rows(vec![vec![S::one(), t.clone()], vec![S::zero(), S::one()]]);
        let want = RingMatrix::from_rows(vec![vec![S::one(), t.negate()], vec![S::zero(), S::one()]]);
        assert_eq!(a.inverse().unwrap(), want);
        assert_eq!(RingMatrix::<S>::identity(3).inverse().unwrap(), RingMatrix::identity(3));
        let b = RingMatrix::from_rows(vec![vec![S::zero(), t], vec![S::one(), S::zero()]]);
        assert_eq!(b.inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn resultant_examples() {
        let (a, b) = (rat(3, 1), rat(-7, 2));
        let r = resultant(&Poly::linear_root(&a), &Poly::linear_root(&b));
        assert_eq!(r, &a - &b);
        let p = qp(&[1, 2, 3]);
        assert_eq!(resultant(&p, &qp(&[5])), rat(25, 1));
        type S = TruncSeries<Fp<3>>;
        let n = 5;
        let one_t3 = S::new(vec![Fp::from_int(1), Fp::from_int(0), Fp::from_int(0), Fp::from_int(1)], n);
        let one_t = S::new(vec![Fp::from_int(1), Fp::from_int(1)], n);
        let r = resultant(&Poly::linear_root(&one_t3), &Poly::linear_root(&one_t));
        assert_eq!(r, S::new(vec![Fp::from_int(0), Fp::from_int(-1), Fp::from_int(0), Fp::from_int(1)], n));
    }
}
