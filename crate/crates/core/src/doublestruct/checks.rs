//! Randomized identity suite for double structures, run over the rationals
//! and over `F_p[t]/(t^N)` for `p` in {2, 3, 5}.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::*;
use crate::algebra::rat;
use crate::localring::{resultant, FiniteField, Fp};

const PREC: usize = 8;
// Root depths stay below 7 and degrees below 4, so every valuation the
// shortcut or the resultant can reach is well inside this precision.
const SHORTCUT_PREC: usize = 32;

trait Sample: Ring {
    fn label() -> String;
    fn sample(rng: &mut ChaCha8Rng) -> Self;
    fn sample_zeta(rng: &mut ChaCha8Rng, split: bool) -> Zeta<Self>;
}

impl Sample for Rational {
    fn label() -> String {
        "Q".into()
    }

    fn sample(rng: &mut ChaCha8Rng) -> Self {
        rat(rng.gen_range(-3..=3), 1)
    }

    fn sample_zeta(rng: &mut ChaCha8Rng, split: bool) -> Zeta<Self> {
        loop {
            let (a, b) = (Self::sample(rng), Self::sample(rng));
            let z = if split {
                Zeta::split(a, b)
            } else {
                Zeta::new(a, b)
            };
            if let Ok(z) = z {
                return z;
            }
        }
    }
}

impl<const P: u64> Sample for TruncSeries<Fp<P>> {
    fn label() -> String {
        format!("F_{P}[t]/(t^{PREC})")
    }

    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let c = (0..PREC).map(|_| Fp::<P>::new(rng.gen_range(0..P))).collect();
        TruncSeries::new(c, PREC)
    }

    fn sample_zeta(rng: &mut ChaCha8Rng, split: bool) -> Zeta<Self> {
        loop {
            let (a, b) = (Self::sample(rng), Self::sample(rng));
            if split {
                if let Ok(z) = Zeta::split(a, b) {
                    return z;
                }
                continue;
            }
            // Unramified: the residual quadratic must have no root in F_p.
            let (s0, p0) = (a.coeff(0), b.coeff(0));
            let has_root = Fp::<P>::elements()
                .iter()
                .any(|x| x.mul_ref(x).sub_ref(&s0.mul_ref(x)).add_ref(&p0).is_zero());
            if !has_root {
                if let Ok(z) = Zeta::new(a, b) {
                    return z;
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    /// The identity did not apply (e.g. `M` singular at this point).
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub ring: String,
    pub points: usize,
    pub checks: BTreeMap<String, Tally>,
    pub failures: Vec<String>,
}

impl IdentityReport {
    fn new(ring: String) -> Self {
        IdentityReport {
            ring,
            points: 0,
            checks: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, name: &str, ok: Option<bool>) {
        let t = self.checks.entry(name.to_string()).or_default();
        match ok {
            Some(true) => t.passed += 1,
            Some(false) => {
                t.failed += 1;
                self.failures.push(format!("{name} at point {}", self.points));
            }
            None => t.skipped += 1,
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.checks.values().all(|t| t.failed == 0)
    }
}

fn random_invertible<R: Sample>(rng: &mut ChaCha8Rng, n: usize) -> (RingMatrix<R>, RingMatrix<R>) {
    loop {
        let g = RingMatrix::from_fn(n, n, |_, _| R::sample(rng));
        if let Ok(inv) = g.inverse() {
            return (g, inv);
        }
    }
}

fn check_point<R: Sample>(rng: &mut ChaCha8Rng, rep: &mut IdentityReport) -> Result<()> {
    let h = rng.gen_range(1..=2usize);
    let split = rng.gen_bool(0.5);
    let zeta = R::sample_zeta(rng, split);
    let x0 = base_point(h, &zeta)?;
    let (g, g_inv) = random_invertible::<R>(rng, 2 * h);
    let x = SPoint::new(h, zeta.clone(), g.mul(&x0.x).mul(&g_inv))?;
    let n = 2 * h;
    let delta = zeta.delta();
    let id = RingMatrix::<R>::identity(n);
    let scalar_delta = RingMatrix::scalar(n, delta.clone());

    rep.record("point_invariants", Some(x.satisfies_invariants()));
    let bd = bisectors(&x0, &x)?;
    let (m, e) = (&bd.m, &bd.e);
    rep.record("difference", Some(m.sub(e) == x0.x.sub(&x0.conjugate())));
    rep.record("anticommutation", Some(m.mul(e) == e.mul(m).neg()));
    rep.record("pythagoras", Some(m.mul(m).add(&e.mul(e)) == scalar_delta));
    let (mp, mm) = (m.add(e), m.sub(e));
    rep.record(
        "sum_squares",
        Some(mp.mul(&mp) == scalar_delta && mm.mul(&mm) == scalar_delta),
    );
    rep.record(
        "intertwining",
        Some(m.mul(&x0.x) == x.x.mul(m) && e.mul(&x0.x) == x.conjugate().mul(e)),
    );
    let c = normalized_centralizer(&bd)?;
    rep.record(
        "centrality",
        Some(c.commutes_with(&x0.x) && c.commutes_with(&x.x)),
    );
    if split || h == 1 {
        let ok = match invariant_polynomial(&x0, &x) {
            Ok(p) => p.poly().is_monic() && p.degree() == h,
            Err(_) => false,
        };
        rep.record("invariant_polynomial", Some(ok));
    } else {
        rep.record("invariant_polynomial", None);
    }

    match stereographic(&x0, &x) {
        Ok(y) => {
            let semi = y.mul(&x.x) == x.conjugate().mul(&y) && y.mul(&x0.x) == x0.conjugate().mul(&y);
            rep.record("stereographic_semilinear", Some(semi));
            rep.record("stereographic_centralizer", Some(id.sub(&y.mul(&y)).mul(&c) == id));
            let back = inverse_stereographic(&x0, &y).map(|p| p.x == x.x);
            rep.record("stereographic_roundtrip", Some(back.unwrap_or(false)));
        }
        Err(Error::StereographicUndefined) | Err(Error::InsufficientPrecision) => {
            rep.record("stereographic_semilinear", None);
            rep.record("stereographic_centralizer", None);
            rep.record("stereographic_roundtrip", None);
        }
        Err(err) => return Err(err),
    }

    let (gp, gm) = g_decompose(&g, &x0)?;
    rep.record("g_sum", Some(gp.add(&gm) == g));
    rep.record("g_plus_commutes", Some(gp.commutes_with(&x0.x)));
    match (gp.inverse(), m.inverse()) {
        (Ok(gp_inv), Ok(m_inv)) => {
            let lhs = g.mul(&gp_inv.mul(&gm)).mul(&g_inv);
            rep.record("g_conjugation", Some(lhs == m_inv.mul(e).neg()));
        }
        _ => rep.record("g_conjugation", None),
    }
    rep.points += 1;
    Ok(())
}

fn run_ring<R: Sample>(seed: u64, points: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = IdentityReport::new(R::label());
    while rep.points < points {
        if let Err(e) = check_point::<R>(&mut rng, &mut rep) {
            rep.failures.push(format!("error at point {}: {e}", rep.points));
            rep.points += 1;
        }
    }
    rep
}

/// All double-structure identities on `points` random points per ring.
pub fn identity_suite(seed: u64, points: usize) -> Vec<IdentityReport> {
    vec![
        run_ring::<Rational>(seed, points),
        run_ring::<TruncSeries<Fp<2>>>(seed.wrapping_add(1), points),
        run_ring::<TruncSeries<Fp<3>>>(seed.wrapping_add(2), points),
        run_ring::<TruncSeries<Fp<5>>>(seed.wrapping_add(3), points),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortcutReport {
    pub pairs: usize,
    pub agreed: usize,
    pub failures: Vec<String>,
}

impl ShortcutReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.agreed == self.pairs
    }
}

/// A unit `mu` with `v(mu - 1) = k` exactly.
fn unit_near_one<const P: u64>(rng: &mut ChaCha8Rng, k: usize) -> TruncSeries<Fp<P>> {
    loop {
        let mut c: Vec<Fp<P>> = (0..SHORTCUT_PREC).map(|_| Fp::new(rng.gen_range(0..P))).collect();
        for x in c.iter_mut().take(k) {
            *x = Fp::zero();
        }
        if c[k].is_zero() {
            continue;
        }
        c[0] = c[0].add_ref(&Fp::one());
        if c[0].is_zero() {
            continue;
        }
        return TruncSeries::new(c, SHORTCUT_PREC);
    }
}

fn dominating_pair<const P: u64>(
    rng: &mut ChaCha8Rng,
) -> (InvPoly<TruncSeries<Fp<P>>>, InvPoly<TruncSeries<Fp<P>>>) {
    let low = if P == 2 { 1 } else { 0 };
    let k = rng.gen_range(low.max(1)..=3);
    let mut p = Poly::one();
    for _ in 0..rng.gen_range(1..=3) {
        let depth = rng.gen_range(k + 1..=k + 3);
        let lam = unit_near_one::<P>(rng, depth);
        p = p.mul(&Poly::linear_root(&lam));
    }
    let mut q = Poly::one();
    for _ in 0..rng.gen_range(1..=3) {
        let depth = rng.gen_range(low..=k);
        let mu = unit_near_one::<P>(rng, depth);
        q = q.mul(&Poly::linear_root(&mu));
    }
    (InvPoly(p), InvPoly(q))
}

fn shortcut_case<const P: u64>(rng: &mut ChaCha8Rng, rep: &mut ShortcutReport) {
    let (p, q) = dominating_pair::<P>(rng);
    let brute = resultant(p.poly(), q.poly()).valuation();
    let fast = res_shortcut(&p, &q);
    rep.pairs += 1;
    match (fast, brute) {
        (Ok(a), Valuation::Finite(b)) if a == b => rep.agreed += 1,
        (fast, brute) => rep
            .failures
            .push(format!("F_{P}: shortcut {fast:?} vs resultant {brute:?}")),
    }
}

/// `res_shortcut` against the Sylvester resultant on random dominating pairs.
pub fn dominance_suite(seed: u64, pairs: usize) -> ShortcutReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ShortcutReport {
        pairs: 0,
        agreed: 0,
        failures: Vec::new(),
    };
    for i in 0..pairs {
        match i % 3 {
            0 => shortcut_case::<2>(&mut rng, &mut rep),
            1 => shortcut_case::<3>(&mut rng, &mut rep),
            _ => shortcut_case::<5>(&mut rng, &mut rep),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_a_small_sample() {
        for rep in identity_suite(7, 25) {
            assert!(rep.pass(), "{rep:?}");
        }
    }

    #[test]
    fn shortcut_agrees_on_a_small_sample() {
        let rep = dominance_suite(11, 12);
        assert!(rep.pass(), "{rep:?}");
    }
}
