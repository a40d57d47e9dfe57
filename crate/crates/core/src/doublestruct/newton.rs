use num_bigint::BigInt;

use crate::algebra::{Poly, Rational, Ring};
use crate::error::{Error, Result};
use crate::localring::{TruncSeries, Valuation};

/// `sum_k c_k (1 - Y)^(d - k)`, whose roots are `1 - 1/lambda` for the roots
/// `lambda` of `P`.
pub fn transformed_poly<F: Ring>(p: &Poly<TruncSeries<F>>) -> Poly<TruncSeries<F>> {
    let d = p.degree().unwrap_or(0);
    let one_minus_y = Poly::new(vec![TruncSeries::one(), TruncSeries::from_int(-1)]);
    let mut acc = Poly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        acc = acc.add(&one_minus_y.pow((d - k) as u32).scale(c));
    }
    acc
}

/// Smallest and largest root valuation from the Newton polygon of the
/// points `(i, vals[i])`; `floor[i]` bounds the untracked coefficients.
fn newton_range(vals: &[Option<usize>], floor: &[usize]) -> Result<(Rational, Rational)> {
    let d = vals.len() - 1;
    if vals[0].is_none() || vals[d].is_none() {
        return Err(Error::InsufficientPrecision);
    }
    let pts: Vec<(usize, usize)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    // Lower convex hull, left to right.
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-p
            let lhs = (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
            let rhs = (p.1 as i128 - a.1 as i128) * (b.0 as i128 - a.0 as i128);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // An untracked coefficient could still pull the polygon down.
    for (i, v) in vals.iter().enumerate() {
        if v.is_none() {
            let seg = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
            let (a, b) = (seg[0], seg[1]);
            let at = Rational::new(
                BigInt::from(a.1 * (b.0 - i) + b.1 * (i - a.0)),
                BigInt::from(b.0 - a.0),
            );
            if Rational::from_integer(BigInt::from(floor[i])) <= at {
                return Err(Error::InsufficientPrecision);
            }
        }
    }
    let slope = |w: &[(usize, usize)]| {
        Rational::new(
            BigInt::from(w[0].1 as i64 - w[1].1 as i64),
            BigInt::from((w[1].0 - w[0].0) as i64),
        )
    };
    // `slope` already negates, and hull slopes increase left to right, so
    // the first segment carries the largest root valuation.
    Ok((slope(&hull[hull.len() - 2..]), slope(&hull[0..2])))
}

/// `(min, max)` root valuations of `p` (degree at least 1).
pub fn root_valuation_range<F: Ring>(p: &Poly<TruncSeries<F>>) -> Result<(Rational, Rational)> {
    let d = p.degree().ok_or(Error::InsufficientPrecision)?;
    let mut vals = Vec::with_capacity(d + 1);
    let mut floor = Vec::with_capacity(d + 1);
    for c in p.coeffs() {
        match c.valuation() {
            Valuation::Finite(v) => {
                vals.push(Some(v));
                floor.push(v);
            }
            Valuation::AtLeast(n) => {
                vals.push(None);
                floor.push(n);
            }
        }
    }
    if d == 0 {
        return Err(Error::InvalidParameter("constant polynomial has no roots".into()));
    }
    newton_range(&vals, &floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::localring::Fp;

    type S = TruncSeries<Fp<2>>;

    fn mono(k: usize) -> S {
        S::monomial(Fp::one(), k, 10)
    }

    #[test]
    fn ranges_of_products() {
        // (Y - t)(Y - t^3)
        let p = Poly::linear_root(&mono(1)).mul(&Poly::linear_root(&mono(3)));
        assert_eq!(root_valuation_range(&p).unwrap(), (rat(1, 1), rat(3, 1)));
        // Y^2 - t^3: both roots of valuation 3/2
        let p = Poly::new(vec![mono(3), S::zero(), S::one()]);
        assert_eq!(root_valuation_range(&p).unwrap(), (rat(3, 2), rat(3, 2)));
    }

    #[test]
    fn transform_sends_one_plus_t_to_valuation_one() {
        // lambda = 1 + t^2 -> 1 - 1/lambda has valuation 2
        let p = Poly::linear_root(&S::new(vec![Fp::one(), Fp::zero(), Fp::one()], 10));
        let r = root_valuation_range(&transformed_poly(&p)).unwrap();
        assert_eq!(r, (rat(2, 1), rat(2, 1)));
    }
}
