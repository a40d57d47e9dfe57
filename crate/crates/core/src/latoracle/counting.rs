//! Brute-force volume counts over `F[t]/(t^N)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{rat, Rational, Ring};
use crate::error::{Error, Result};
use crate::localring::{FiniteField, RingMatrix, TruncSeries, Valuation};

type S<F> = TruncSeries<F>;

/// The `idx`-th element of `F[t]/(t^n)` in base-`|F|` digit order.
fn series_from_index<F: FiniteField>(mut idx: u64, n: usize) -> S<F> {
    let mut c = Vec::with_capacity(n);
    for _ in 0..n {
        c.push(F::from_index(idx % F::ORDER));
        idx /= F::ORDER;
    }
    S::new(c, n)
}

fn big_pow(base: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), e)
}

fn frac(num: u64, base: u64, e: usize) -> Rational {
    Rational::new(BigInt::from(num), big_pow(base, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeTable {
    pub field_order: u64,
    pub prec: usize,
    /// Exact bucket volumes for valuations below `prec`.
    #[serde(serialize_with = "ser_map")]
    pub volumes: BTreeMap<usize, Rational>,
    /// Volume whose valuation is at least `prec`.
    #[serde(serialize_with = "ser_rat")]
    pub tail: Rational,
}

fn ser_rat<Sr: serde::Serializer>(r: &Rational, s: Sr) -> std::result::Result<Sr::Ok, Sr::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_map<Sr: serde::Serializer>(
    m: &BTreeMap<usize, Rational>,
    s: Sr,
) -> std::result::Result<Sr::Ok, Sr::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl VolumeTable {
    pub fn total(&self) -> Rational {
        self.volumes.values().fold(self.tail.clone(), |a, b| a + b)
    }

    pub fn volume(&self, n: usize) -> Rational {
        self.volumes.get(&n).cloned().unwrap_or_else(|| rat(0, 1))
    }
}

/// Counts `g ∈ Mat_a(F[t]/(t^N))` by `v(det g)`, normalized by `|F|^{a^2 N}`.
pub fn count_det_valuations<F: FiniteField>(a: usize, n: usize) -> Result<VolumeTable> {
    if !(1..=2).contains(&a) || n == 0 {
        return Err(Error::InvalidParameter(format!("unsupported size a = {a}, N = {n}")));
    }
    let per_entry = F::ORDER.checked_pow(n as u32).ok_or_else(|| Error::InvalidParameter("too large".into()))?;
    let total = per_entry
        .checked_pow((a * a) as u32)
        .filter(|&t| t <= 1 << 28)
        .ok_or_else(|| Error::InvalidParameter("enumeration too large".into()))?;
    let mut counts = vec![0u64; n + 1];
    let partial: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, mut idx| {
                let mut entries = Vec::with_capacity(a * a);
                for _ in 0..a * a {
                    entries.push(series_from_index::<F>(idx % per_entry, n));
                    idx /= per_entry;
                }
                let m = RingMatrix::from_fn(a, a, |i, j| entries[i * a + j].clone());
                let bucket = match m.det().valuation() {
                    Valuation::Finite(v) if v < n => v,
                    _ => n,
                };
                acc[bucket] += 1;
                acc
            },
        )
        .collect();
    for p in partial {
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }
    let denom = a * a * n;
    Ok(VolumeTable {
        field_order: F::ORDER,
        prec: n,
        volumes: (0..n).map(|k| (k, frac(counts[k], F::ORDER, denom))).collect(),
        tail: frac(counts[n], F::ORDER, denom),
    })
}

/// Coefficients of `prod_{i=1}^a (1 - Q^{-i}) / (1 - Q^{-i} X)` below `X^n`.
pub fn det_volume_formula(a: usize, big_q: u64, n: usize) -> Vec<Rational> {
    let mut series = vec![rat(0, 1); n];
    if n > 0 {
        series[0] = rat(1, 1);
    }
    let mut eps = rat(1, 1);
    for i in 1..=a {
        let r = frac(1, big_q, i);
        eps *= rat(1, 1) - r.clone();
        // multiply by 1 / (1 - r X)
        for k in 1..n {
            let prev = series[k - 1].clone();
            series[k] += r.clone() * prev;
        }
    }
    series.into_iter().map(|c| c * eps.clone()).collect()
}

/// The least `(s, p)` (by index) with `X^2 - s X + p` irreducible over `F`.
pub fn irreducible_quadratic<F: FiniteField>() -> (F, F) {
    for s in F::elements() {
        for p in F::elements() {
            let has_root = F::elements()
                .iter()
                .any(|x| x.mul_ref(x).sub_ref(&s.mul_ref(x)).add_ref(&p).is_zero());
            if !has_root {
                return (s, p);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// For the unramified `x0` with characteristic polynomial `m(X)`, buckets
/// `x ∈ Mat_2(F[t]/(t^N))` with the same characteristic polynomial by
/// `v(-det(x - x0) / delta)`. Volumes are normalized by `q^{2N}`, the volume
/// of the centralizer-free directions, so the total mass is `1 - 1/q`.
pub fn count_class_valuation_stat<F: FiniteField>(n: usize) -> Result<VolumeTable> {
    let q = F::ORDER;
    let per_entry = q.checked_pow(n as u32).ok_or_else(|| Error::InvalidParameter("too large".into()))?;
    let total = per_entry
        .checked_pow(3)
        .filter(|&t| t <= 1 << 28)
        .ok_or_else(|| Error::InvalidParameter("enumeration too large".into()))?;
    let (s, p) = irreducible_quadratic::<F>();
    let sc = S::constant(s, n);
    let pc = S::constant(p, n);
    let delta = sc.mul_ref(&sc).sub_ref(&S::from_int(4).mul_ref(&pc)).with_prec(n);
    let delta_inv = delta.checked_inverse()?;
    let partial: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, idx| {
                let a = series_from_index::<F>(idx % per_entry, n);
                let b = series_from_index::<F>((idx / per_entry) % per_entry, n);
                let c = series_from_index::<F>(idx / (per_entry * per_entry), n);
                let d = sc.sub_ref(&a);
                if a.mul_ref(&d).sub_ref(&b.mul_ref(&c)) != pc {
                    return acc;
                }
                // x - x0 with x0 = [[0, -p], [1, s]]
                let e11 = a.clone();
                let e12 = b.add_ref(&pc);
                let e21 = c.sub_ref(&S::one());
                let e22 = d.sub_ref(&sc);
                let det = e11.mul_ref(&e22).sub_ref(&e12.mul_ref(&e21));
                let w = det.negate().mul_ref(&delta_inv);
                let bucket = match w.valuation() {
                    Valuation::Finite(v) if v < n => v,
                    _ => n,
                };
                acc[bucket] += 1;
                acc
            },
        )
        .collect();
    let mut counts = vec![0u64; n + 1];
    for part in partial {
        for (c, x) in counts.iter_mut().zip(part) {
            *c += x;
        }
    }
    Ok(VolumeTable {
        field_order: q,
        prec: n,
        volumes: (0..n).map(|k| (k, frac(counts[k], q, 2 * n))).collect(),
        tail: frac(counts[n], q, 2 * n),
    })
}

/// Predicted bucket volumes of the class statistic: `(1 - q^-2) q^{-w}` for
/// even `w > 0`, `1 - q^-1 - q^-2` at zero, nothing at odd `w`.
pub fn class_stat_formula(q: u64, w: usize) -> Rational {
    let one = rat(1, 1);
    if w == 0 {
        one - frac(1, q, 1) - frac(1, q, 2)
    } else if w % 2 == 1 {
        rat(0, 1)
    } else {
        (one - frac(1, q, 2)) * frac(1, q, w)
    }
}

/// Mass of all buckets `w >= n` predicted by [`class_stat_formula`].
pub fn class_stat_tail(q: u64, n: usize) -> Rational {
    // sum over even w >= max(n, 2) of (1 - q^-2) q^-w = q^{-w0}
    let w0 = if n <= 2 { 2 } else { n + n % 2 };
    let head = if n == 0 { class_stat_formula(q, 0) } else { rat(0, 1) };
    head + frac(1, q, w0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{Fp, Fq2};

    #[test]
    fn scalar_det_counts() {
        let t = count_det_valuations::<Fq2<2>>(1, 3).unwrap();
        assert_eq!(t.volume(0), rat(3, 4));
        assert_eq!(t.volume(1), rat(3, 16));
        assert_eq!(t.volume(2), rat(3, 64));
        assert_eq!(t.tail, rat(1, 64));
        assert_eq!(det_volume_formula(1, 4, 3), vec![rat(3, 4), rat(3, 16), rat(3, 64)]);
    }

    #[test]
    fn gl2_density() {
        let t = count_det_valuations::<Fp<2>>(2, 1).unwrap();
        assert_eq!(t.volume(0), rat(6, 16));
        assert_eq!(det_volume_formula(2, 2, 1)[0], rat(3, 8));
    }

    #[test]
    fn irreducible_quadratics() {
        assert_eq!(irreducible_quadratic::<Fp<2>>(), (Fp::new(1), Fp::new(1)));
        assert_eq!(irreducible_quadratic::<Fp<3>>(), (Fp::new(0), Fp::new(1)));
    }

    #[test]
    fn class_stat_small() {
        let t = count_class_valuation_stat::<Fp<2>>(2).unwrap();
        assert_eq!(t.total(), rat(1, 2));
        assert_eq!(t.volume(0), class_stat_formula(2, 0));
        assert_eq!(t.volume(1), rat(0, 1));
        assert_eq!(t.tail, class_stat_tail(2, 2));
    }
}
