//! The algebra of matrices commuting with both points of a pair, found by
//! solving the linear system `[X, x0] = [X, x] = 0` over `F[t]/(t^N)`.

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::localring::{FiniteField, RingMatrix, TruncSeries, Valuation};

type S<F> = TruncSeries<F>;

/// `O`-basis `{1, beta}` of the saturated commutant, with `beta^2 = c0 + c1 beta`.
#[derive(Clone, Debug)]
pub struct Commutant<F: FiniteField> {
    pub beta: RingMatrix<S<F>>,
    pub c0: S<F>,
    pub c1: S<F>,
}

fn lift<F: FiniteField>(x: &S<F>, prec: usize) -> S<F> {
    S::new(x.coeffs().to_vec(), prec)
}

fn finite<F: FiniteField>(x: &S<F>) -> Option<usize> {
    match x.valuation() {
        Valuation::Finite(v) => Some(v),
        Valuation::AtLeast(_) => None,
    }
}

/// Kernel of an `O/t^N`-linear map, keeping only the directions on which the
/// matrix vanishes identically after elimination. Returns the kernel basis
/// (as columns of the accumulated column operations) and the largest
/// finite pivot valuation seen.
fn saturated_kernel<F: FiniteField>(a: &RingMatrix<S<F>>, prec: usize) -> (Vec<Vec<S<F>>>, usize) {
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<S<F>>> = (0..m)
        .map(|i| (0..n).map(|j| lift(a.get(i, j), prec)).collect())
        .collect();
    let mut ops: Vec<Vec<S<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| S::constant(if i == j { F::one() } else { F::zero() }, prec))
                .collect()
        })
        .collect();
    let mut worst = 0;
    let mut k = 0;
    while k < m.min(n) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Some(v) = finite(x) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        worst = worst.max(v);
        w.swap(k, pi);
        for row in w.iter_mut() {
            row.swap(k, pj);
        }
        for row in ops.iter_mut() {
            row.swap(k, pj);
        }
        let unit = lift(&w[k][k].unshift(v).expect("pivot"), prec);
        let inv = unit.checked_inverse().expect("unit");
        for x in w[k].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        // Column elimination along row k, recorded in `ops`.
        for j in k + 1..n {
            if w[k][j].is_zero() {
                continue;
            }
            let f = lift(&w[k][j].unshift(v).expect("v is minimal"), prec);
            for row in w.iter_mut() {
                let d = row[k].mul_ref(&f);
                row[j] = row[j].sub_ref(&d);
            }
            for row in ops.iter_mut() {
                let d = row[k].mul_ref(&f);
                row[j] = row[j].sub_ref(&d);
            }
        }
        // Row elimination below row k does not touch the kernel.
        for i in k + 1..m {
            if w[i][k].is_zero() {
                continue;
            }
            let f = lift(&w[i][k].unshift(v).expect("v is minimal"), prec);
            for j in k..n {
                let d = f.mul_ref(&w[k][j]);
                w[i][j] = w[i][j].sub_ref(&d);
            }
        }
        k += 1;
    }
    let basis = (k..n).map(|j| ops.iter().map(|row| row[j].clone()).collect()).collect();
    (basis, worst)
}

fn commutator_system<F: FiniteField>(mats: &[&RingMatrix<S<F>>]) -> RingMatrix<S<F>> {
    let n = mats[0].rows();
    let unknowns = n * n;
    let mut rows = Vec::new();
    for y in mats {
        // (X y - y X)_{ij} = sum_k X_ik y_kj - y_ik X_kj
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![S::<F>::zero(); unknowns];
                for k in 0..n {
                    let a = &mut row[i * n + k];
                    *a = a.add_ref(y.get(k, j));
                    let b = &mut row[k * n + j];
                    *b = b.sub_ref(y.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    RingMatrix::from_rows(rows)
}

fn reshape<F: FiniteField>(v: &[S<F>], n: usize) -> RingMatrix<S<F>> {
    RingMatrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

/// Solves `I = a K1 + b K2` through a 2x2 minor that is a unit.
fn solve_pair<F: FiniteField>(k1: &[S<F>], k2: &[S<F>], target: &[S<F>]) -> Result<(S<F>, S<F>)> {
    let n = k1.len();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            let det = k1[r1].mul_ref(&k2[r2]).sub_ref(&k1[r2].mul_ref(&k2[r1]));
            let Ok(inv) = det.checked_inverse() else { continue };
            let a = target[r1].mul_ref(&k2[r2]).sub_ref(&target[r2].mul_ref(&k2[r1])).mul_ref(&inv);
            let b = k1[r1].mul_ref(&target[r2]).sub_ref(&k1[r2].mul_ref(&target[r1])).mul_ref(&inv);
            let ok = (0..n).all(|i| k1[i].mul_ref(&a).add_ref(&k2[i].mul_ref(&b)) == target[i]);
            return if ok { Ok((a, b)) } else { Err(Error::InsufficientPrecision) };
        }
    }
    Err(Error::InsufficientPrecision)
}

/// Joint commutant of `x0` and `x`, expected to have rank `h` over `O`.
pub fn joint_commutant<F: FiniteField>(
    x0: &RingMatrix<S<F>>,
    x: &RingMatrix<S<F>>,
    h: usize,
    prec: usize,
) -> Result<Commutant<F>> {
    let n = x0.rows();
    let sys = commutator_system(&[x0, x]);
    let (kernel, worst) = saturated_kernel(&sys, prec);
    if kernel.len() != h {
        return Err(Error::CommutantRank { expected: h, found: kernel.len() });
    }
    if 2 * worst >= prec {
        return Err(Error::InsufficientPrecision);
    }
    if h != 2 {
        return Err(Error::Unsupported("only rank-two commutants are reduced to {1, beta}".into()));
    }
    let id: Vec<S<F>> = RingMatrix::<S<F>>::identity(n).entries().iter().map(|e| lift(e, prec)).collect();
    let (a, b) = solve_pair(&kernel[0], &kernel[1], &id)?;
    let beta = if a.checked_inverse().is_ok() {
        reshape(&kernel[1], n)
    } else if b.checked_inverse().is_ok() {
        reshape(&kernel[0], n)
    } else {
        return Err(Error::InsufficientPrecision);
    };
    let sq = beta.mul(&beta);
    let beta_v: Vec<S<F>> = beta.entries().to_vec();
    let (c0, c1) = solve_pair(&id, &beta_v, sq.entries())?;
    Ok(Commutant { beta, c0, c1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doublestruct::{bisectors, build_matched_pair, normalized_centralizer};
    use crate::localring::Fp;

    #[test]
    fn rank_two_and_contains_centralizer() {
        let prec = 12;
        let (x0, x) = build_matched_pair::<Fp<2>>(3, prec).unwrap();
        let c = joint_commutant(&x0.x, &x.x, 2, prec).unwrap();
        assert!(c.beta.commutes_with(&x0.x) && c.beta.commutes_with(&x.x));
        let mc = normalized_centralizer(&bisectors(&x0, &x).unwrap()).unwrap();
        let id: Vec<_> = RingMatrix::identity(4).entries().iter().map(|e| lift(e, prec)).collect();
        assert!(solve_pair(&id, c.beta.entries(), mc.entries()).is_ok());
    }

    #[test]
    fn equal_points_have_large_commutant() {
        let (x0, _) = build_matched_pair::<Fp<3>>(1, 8).unwrap();
        let err = joint_commutant(&x0.x, &x0.x, 2, 8).unwrap_err();
        assert_eq!(err, Error::CommutantRank { expected: 2, found: 8 });
    }
}
