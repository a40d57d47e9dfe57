//! Lattices stable under a matched pair, grouped into orbits of the joint
//! commutant's unit group.
//!
//! Since `x0 = diag(1, 1, 0, 0)`, a stable lattice splits as `Λ₊ ⊕ Λ₋`, and
//! each summand is a 2-dimensional lattice described by its Hermite form.
//! Lattices are taken modulo `t^Z`, with the representative contained in
//! `O^4` but not in `t O^4`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::commutant::{joint_commutant, Commutant};
use super::hermite::Hnf;
use crate::algebra::Ring;
use crate::doublestruct::{bisectors, build_matched_pair, theta};
use crate::error::{Error, Result};
use crate::localring::{FiniteField, RingMatrix, TruncSeries, Valuation};

type S<F> = TruncSeries<F>;
type Block<F> = RingMatrix<S<F>>;

#[derive(Clone, Debug)]
pub struct StableLattice<F: FiniteField> {
    pub plus: Hnf<F>,
    pub minus: Hnf<F>,
}

impl<F: FiniteField> StableLattice<F> {
    pub fn key(&self) -> Vec<u32> {
        let mut k = self.plus.key();
        k.push(u32::MAX);
        k.extend(self.minus.key());
        k
    }

    pub fn depth(&self) -> usize {
        self.plus.depth().max(self.minus.depth())
    }

    /// The 4x4 basis, block diagonal.
    pub fn basis(&self) -> RingMatrix<S<F>> {
        let p = self.plus.prec();
        RingMatrix::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
            (true, true) => self.plus.columns()[j][i].clone(),
            (false, false) => self.minus.columns()[j - 2][i - 2].clone(),
            _ => S::new(Vec::new(), p),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassStats {
    pub m_plus: usize,
    pub m_minus: usize,
    pub length: usize,
    pub stab_index: u64,
    /// `q^max(m_plus, m_minus)`, reported next to the measured index.
    pub expected_index: u64,
    pub orbit_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeParams {
    pub q: u64,
    pub v: usize,
    pub window: usize,
    pub prec: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeChecks {
    /// Each orbit modulo `t^Z` has twice as many lattices as its unit orbit.
    pub counting_identity: bool,
    /// Every summand is principal over its detected order.
    pub principal: bool,
    pub length_invariant: bool,
    pub length_in_range: bool,
    pub index_matches_order: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub params: LatticeParams,
    pub class_count: usize,
    pub lattice_count: usize,
    pub per_class: Vec<ClassStats>,
    pub weighted_poly: Vec<u64>,
    pub checks: LatticeChecks,
}

impl LatticeReport {
    pub fn checks_pass(&self) -> bool {
        let c = &self.checks;
        c.counting_identity && c.principal && c.length_invariant && c.length_in_range
    }
}

fn finite<F: FiniteField>(x: &S<F>) -> Option<usize> {
    match x.valuation() {
        Valuation::Finite(v) => Some(v),
        Valuation::AtLeast(_) => None,
    }
}

fn apply<F: FiniteField>(g: &Block<F>, w: &[S<F>]) -> Vec<S<F>> {
    g.apply(w)
}

fn min_prec<F: FiniteField>(m: &Block<F>) -> usize {
    m.entries().iter().map(|e| e.prec()).min().unwrap_or(usize::MAX)
}

/// Tries `t^{-k}` on both summands so that the pair lies in `O^4` but not in `t O^4`.
fn normalize<F: FiniteField>(plus: Hnf<F>, minus: Hnf<F>, store: usize) -> Result<StableLattice<F>> {
    let k = plus.min_valuation().min(minus.min_valuation());
    let (p, m) = (plus.divide_by_t(k)?, minus.divide_by_t(k)?);
    let room = p.prec().min(m.prec());
    if room < store || p.depth() >= room || m.depth() >= room {
        return Err(Error::InsufficientPrecision);
    }
    Ok(StableLattice { plus: p.at_prec(store), minus: m.at_prec(store) })
}

/// Everything derived from the pair that the enumeration needs.
pub struct LatticeOracle<F: FiniteField> {
    v: usize,
    window: usize,
    prec: usize,
    store: usize,
    x: RingMatrix<S<F>>,
    theta_minus: Block<F>,
    theta_val: usize,
    commutant: Commutant<F>,
    z: RingMatrix<S<F>>,
    m0: usize,
}

fn block<F: FiniteField>(m: &RingMatrix<S<F>>, r: usize, c: usize) -> Block<F> {
    m.block(r, c, 2, 2)
}

/// `beta - c` for a constant `c` chosen digit by digit so that its norm has
/// odd valuation `2 m0 + 1`; then `z / t^m0` is a uniformizer of `L`.
fn uniformizer<F: FiniteField>(beta: &RingMatrix<S<F>>, prec: usize) -> Result<(RingMatrix<S<F>>, usize)> {
    let id = RingMatrix::<S<F>>::identity(4);
    let mut c = S::<F>::new(Vec::new(), prec);
    for k in 0..prec / 2 {
        let mut best: Option<(usize, S<F>)> = None;
        for d in F::elements() {
            let cand = c.add_ref(&S::monomial(d, k, prec));
            let z = beta.sub(&id.scale(&cand));
            let Some(v) = finite(&block(&z, 0, 0).det()) else { continue };
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, cand));
            }
        }
        let (v, cand) = best.ok_or(Error::InsufficientPrecision)?;
        if v % 2 == 1 {
            return Ok((beta.sub(&id.scale(&cand)), (v - 1) / 2));
        }
        if v <= 2 * k {
            return Err(Error::Unsupported("commutant is not a ramified quadratic field".into()));
        }
        c = cand;
    }
    Err(Error::InsufficientPrecision)
}

impl<F: FiniteField> LatticeOracle<F> {
    pub fn new(v: usize, window: usize, prec: usize) -> Result<Self> {
        if window < v + 1 {
            return Err(Error::InvalidParameter(format!("window {window} must be at least v + 1 = {}", v + 1)));
        }
        if prec < 2 * window + v + 2 {
            return Err(Error::InvalidParameter(format!(
                "precision {prec} must be at least 2W + v + 2 = {}",
                2 * window + v + 2
            )));
        }
        let first = Self::build(v, window, prec)?;
        let needed = first.needed_prec();
        if needed <= prec {
            Ok(first)
        } else {
            Self::build(v, window, needed)
        }
    }

    fn unit_levels(&self) -> usize {
        2 * (self.window + self.m0) + 2
    }

    fn needed_prec(&self) -> usize {
        let lost = self.prec - min_prec(&self.z);
        self.store + self.m0 * self.unit_levels() + self.window + 4 + lost
    }

    fn build(v: usize, window: usize, prec: usize) -> Result<Self> {
        let (x0, x) = build_matched_pair::<F>(v, prec)?;
        let th = theta(&bisectors(&x0, &x)?)?;
        let theta_minus = block(&th, 2, 0);
        let theta_val = finite(&theta_minus.det()).ok_or(Error::InsufficientPrecision)?;
        let commutant = joint_commutant(&x0.x, &x.x, 2, prec)?;
        let (z, m0) = uniformizer(&commutant.beta, prec)?;
        if !block(&z, 0, 2).is_zero() || !block(&z, 2, 0).is_zero() {
            return Err(Error::InsufficientPrecision);
        }
        Ok(LatticeOracle {
            v,
            window,
            prec,
            store: window + 1,
            x: x.x,
            theta_minus,
            theta_val,
            commutant,
            z,
            m0,
        })
    }

    pub fn commutant(&self) -> &Commutant<F> {
        &self.commutant
    }

    /// `v(N(z)) = 2 m0 + 1`.
    pub fn uniformizer_shift(&self) -> usize {
        self.m0
    }

    pub fn params(&self) -> LatticeParams {
        LatticeParams { q: F::ORDER, v: self.v, window: self.window, prec: self.prec }
    }

    /// All 2-dimensional lattices `t^W O^2 ⊆ Λ ⊆ O^2` stable under `y`.
    fn stable_summands(&self, y: &Block<F>) -> Vec<Hnf<F>> {
        let w = self.window;
        let store = self.store;
        let shapes: Vec<(usize, usize)> = (0..=w).flat_map(|a| (0..=w).map(move |b| (a, b))).collect();
        shapes
            .par_iter()
            .flat_map_iter(|&(a, b)| {
                let low = (a + b).saturating_sub(w);
                let free = a.saturating_sub(low);
                let count = F::ORDER.pow(free as u32);
                (0..count).filter_map(move |mut idx| {
                    let mut coeffs = vec![F::zero(); low];
                    for _ in 0..free {
                        coeffs.push(F::from_index(idx % F::ORDER));
                        idx /= F::ORDER;
                    }
                    let u = S::new(coeffs, store);
                    let h = Hnf::from_upper(vec![a, b], &[(0, 1, u)], store);
                    h.columns().iter().all(|c| h.contains(&apply(y, c))).then_some(h)
                })
            })
            .collect()
    }

    /// All stable lattices in the window, modulo `t^Z`, sorted by key.
    pub fn enumerate(&self) -> Result<Vec<StableLattice<F>>> {
        let x11 = block(&self.x, 0, 0);
        let x12 = block(&self.x, 0, 2);
        let x21 = block(&self.x, 2, 0);
        let x22 = block(&self.x, 2, 2);
        let plus = self.stable_summands(&x11);
        let minus = self.stable_summands(&x22);
        let found: Vec<StableLattice<F>> = plus
            .par_iter()
            .flat_map_iter(|p| {
                let (x12, x21) = (&x12, &x21);
                minus.iter().filter_map(move |m| {
                    if p.min_valuation() > 0 && m.min_valuation() > 0 {
                        return None;
                    }
                    let ok = p.columns().iter().all(|c| m.contains(&apply(x21, c)))
                        && m.columns().iter().all(|c| p.contains(&apply(x12, c)));
                    ok.then(|| StableLattice { plus: p.clone(), minus: m.clone() })
                })
            })
            .collect();
        if found.iter().any(|l| l.depth() >= self.window) {
            return Err(Error::WindowOverflow { window: self.window });
        }
        let mut sorted: BTreeMap<Vec<u32>, StableLattice<F>> = BTreeMap::new();
        for l in found {
            sorted.insert(l.key(), l);
        }
        Ok(sorted.into_values().collect())
    }

    fn act(&self, g: &(Block<F>, Block<F>), l: &StableLattice<F>) -> Result<StableLattice<F>> {
        let prec = min_prec(&g.0).min(min_prec(&g.1));
        let lift = |c: &[S<F>]| -> Vec<S<F>> { c.iter().map(|x| S::new(x.coeffs().to_vec(), prec)).collect() };
        let gp: Vec<Vec<S<F>>> = l.plus.columns().iter().map(|c| apply(&g.0, &lift(c))).collect();
        let gm: Vec<Vec<S<F>>> = l.minus.columns().iter().map(|c| apply(&g.1, &lift(c))).collect();
        normalize(Hnf::from_generators(2, &gp, prec), Hnf::from_generators(2, &gm, prec), self.store)
    }

    fn split(&self, g: &RingMatrix<S<F>>) -> (Block<F>, Block<F>) {
        (block(g, 0, 0), block(g, 2, 2))
    }

    /// `t^{m0 j} + c z^j` for nonzero residues `c` and `1 <= j <= J`; modulo
    /// `t^Z` these are the units `1 + c' ϖ^j` and generate `O_L^×` up to
    /// elements acting trivially on the window.
    fn unit_generators(&self) -> Vec<(Block<F>, Block<F>)> {
        let prec = min_prec(&self.z);
        let id = RingMatrix::<S<F>>::identity(4);
        let mut gens = Vec::new();
        let mut zj = id.clone();
        for j in 1..=self.unit_levels() {
            zj = zj.mul(&self.z);
            let shift = id.scale(&S::monomial(F::one(), self.m0 * j, prec));
            for c in F::elements().into_iter().skip(1) {
                let g = shift.add(&zj.scale(&S::constant(c, prec)));
                gens.push(self.split(&g));
            }
        }
        gens
    }

    fn order_index(&self, h: &Hnf<F>, zb: &Block<F>) -> Result<usize> {
        let limit = self.window + self.m0 + 1;
        let images: Vec<Vec<S<F>>> = h.columns().iter().map(|c| apply(zb, c)).collect();
        'm: for m in 0..=limit {
            for w in &images {
                if !self.in_scaled(h, w, m).unwrap_or(false) {
                    continue 'm;
                }
            }
            return Ok(m);
        }
        Err(Error::InsufficientPrecision)
    }

    /// Whether `t^m w ∈ t^{m0} Λ`.
    fn in_scaled(&self, h: &Hnf<F>, w: &[S<F>], m: usize) -> Result<bool> {
        Ok(self.scaled_coords(h, w, m)?.is_some())
    }

    fn scaled_coords(&self, h: &Hnf<F>, w: &[S<F>], m: usize) -> Result<Option<Vec<S<F>>>> {
        let w: Vec<S<F>> = if m >= self.m0 {
            w.iter().map(|x| x.shift(m - self.m0)).collect()
        } else {
            let k = self.m0 - m;
            let mut out = Vec::with_capacity(w.len());
            for x in w {
                match x.unshift(k) {
                    Ok(y) => out.push(y),
                    Err(Error::NotInvertible) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
            out
        };
        Ok(h.coords(&w))
    }

    /// Searches residue combinations of the basis for a single generator
    /// over `R_m = O + t^m O_L`.
    fn is_principal(&self, h: &Hnf<F>, zb: &Block<F>, m: usize) -> Result<bool> {
        let cols = h.columns();
        for i in 1..F::ORDER * F::ORDER {
            let (c1, c2) = (F::from_index(i % F::ORDER), F::from_index(i / F::ORDER));
            let w: Vec<S<F>> = (0..2)
                .map(|r| {
                    cols[0][r]
                        .mul_ref(&S::constant(c1, h.prec()))
                        .add_ref(&cols[1][r].mul_ref(&S::constant(c2, h.prec())))
                })
                .collect();
            let cw = h.coords(&w).ok_or(Error::InsufficientPrecision)?;
            let Some(cy) = self.scaled_coords(h, &apply(zb, &w), m)? else {
                return Err(Error::InsufficientPrecision);
            };
            let det = cw[0].mul_ref(&cy[1]).sub_ref(&cw[1].mul_ref(&cy[0]));
            if det.checked_inverse().is_ok() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `O^4` itself, which is stable because both points are integral.
    pub fn standard_lattice(&self) -> StableLattice<F> {
        let h = Hnf::from_upper(vec![0, 0], &[], self.store);
        StableLattice { plus: h.clone(), minus: h }
    }

    /// The reference lattice `O^2 ⊕ Θ₋ O^2`, whose length is zero by
    /// construction. It need not be stable; lengths do not depend on it.
    pub fn normalized_base(&self) -> StableLattice<F> {
        let cols: Vec<Vec<S<F>>> = (0..2).map(|j| self.theta_minus.column(j)).collect();
        let plus = Hnf::from_upper(vec![0, 0], &[], self.store);
        StableLattice { plus, minus: Hnf::from_generators(2, &cols, self.store) }
    }

    /// Length of `Λ₋ / Θ₋ Λ₊`, or `None` if `Θ₋ Λ₊` is not inside `Λ₋`.
    pub fn length(&self, l: &StableLattice<F>) -> Result<Option<usize>> {
        let inside = l
            .plus
            .columns()
            .iter()
            .all(|c| l.minus.contains(&apply(&self.theta_minus, c)));
        if !inside {
            return Ok(None);
        }
        let len = self.theta_val + l.plus.colength();
        Ok(len.checked_sub(l.minus.colength()))
    }

    pub fn run(&self) -> Result<LatticeReport> {
        let lattices = self.enumerate()?;
        let index: BTreeMap<Vec<u32>, usize> =
            lattices.iter().enumerate().map(|(i, l)| (l.key(), i)).collect();
        let lookup = |l: &StableLattice<F>| -> Result<usize> {
            index.get(&l.key()).copied().ok_or(Error::WindowOverflow { window: self.window })
        };
        let units = self.unit_generators();
        let zgen = self.split(&self.z);

        let unit_images: Vec<Vec<usize>> = lattices
            .par_iter()
            .map(|l| units.iter().map(|g| lookup(&self.act(g, l)?)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let z_images: Vec<usize> = lattices
            .par_iter()
            .map(|l| lookup(&self.act(&zgen, l)?))
            .collect::<Result<_>>()?;

        let mut unit_uf = UnionFind::new(lattices.len());
        for (i, imgs) in unit_images.iter().enumerate() {
            for &j in imgs {
                unit_uf.union(i, j);
            }
        }
        let mut full_uf = unit_uf.clone();
        for (i, &j) in z_images.iter().enumerate() {
            full_uf.union(i, j);
        }

        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..lattices.len() {
            classes.entry(full_uf.find(i)).or_default().push(i);
        }
        let mut unit_sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..lattices.len() {
            *unit_sizes.entry(unit_uf.find(i)).or_default() += 1;
        }

        let (zp, zm) = zgen;
        let q = F::ORDER;
        let mut checks = LatticeChecks {
            counting_identity: true,
            principal: true,
            length_invariant: true,
            length_in_range: true,
            index_matches_order: true,
        };
        let mut per_class = Vec::new();
        let mut poly: Vec<u64> = Vec::new();
        // Members are in key order, so the first one is the lexicographic minimum.
        for members in classes.values() {
            let rep = &lattices[members[0]];
            let lengths: BTreeSet<Option<usize>> =
                members.iter().map(|&i| self.length(&lattices[i])).collect::<Result<_>>()?;
            if lengths.len() != 1 {
                checks.length_invariant = false;
            }
            let length = match self.length(rep)? {
                Some(l) if l <= self.v => l,
                other => {
                    checks.length_in_range = false;
                    other.unwrap_or(0)
                }
            };
            let m_plus = self.order_index(&rep.plus, &zp)?;
            let m_minus = self.order_index(&rep.minus, &zm)?;
            if !self.is_principal(&rep.plus, &zp, m_plus)? || !self.is_principal(&rep.minus, &zm, m_minus)? {
                checks.principal = false;
            }
            let stab = unit_sizes[&unit_uf.find(members[0])] as u64;
            let expected = q.pow(m_plus.max(m_minus) as u32);
            if stab != expected {
                checks.index_matches_order = false;
            }
            if members.len() as u64 != 2 * stab {
                checks.counting_identity = false;
            }
            if poly.len() <= length {
                poly.resize(length + 1, 0);
            }
            poly[length] += stab;
            per_class.push(ClassStats {
                m_plus,
                m_minus,
                length,
                stab_index: stab,
                expected_index: expected,
                orbit_size: members.len(),
            });
        }
        per_class.sort_by(|a, b| {
            (a.length, a.m_plus, a.m_minus, a.stab_index).cmp(&(b.length, b.m_plus, b.m_minus, b.stab_index))
        });
        Ok(LatticeReport {
            params: self.params(),
            class_count: per_class.len(),
            lattice_count: lattices.len(),
            per_class,
            weighted_poly: poly,
            checks,
        })
    }
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::Fp;

    #[test]
    fn ramified_commutant() {
        for v in [1, 3] {
            let o = LatticeOracle::<Fp<2>>::new(v, v + 2, 3 * v + 8).unwrap();
            let zp = block(&o.z, 0, 0);
            assert_eq!(finite(&zp.det()), Some(2 * o.uniformizer_shift() + 1));
        }
    }

    #[test]
    fn base_lengths() {
        let o = LatticeOracle::<Fp<2>>::new(3, 5, 15).unwrap();
        assert_eq!(o.length(&o.normalized_base()).unwrap(), Some(0));
        assert_eq!(o.length(&o.standard_lattice()).unwrap(), Some(3));
        let all = o.enumerate().unwrap();
        assert!(all.iter().any(|l| l.key() == o.standard_lattice().key()));
    }

    #[test]
    fn smallest_case() {
        let r = LatticeOracle::<Fp<2>>::new(1, 2, 7).unwrap().run().unwrap();
        assert_eq!(r.weighted_poly, vec![1, 1]);
        assert_eq!(r.lattice_count, 4);
        assert!(r.checks_pass());
    }

    #[test]
    fn cell_with_both_orders_one() {
        let r = LatticeOracle::<Fp<2>>::new(3, 5, 15).unwrap().run().unwrap();
        assert_eq!(r.weighted_poly, vec![3, 5, 5, 3]);
        assert!(r
            .per_class
            .iter()
            .any(|c| c.m_plus == 1 && c.m_minus == 1 && c.length == 0 && c.stab_index == 2));
        assert!(r.checks.index_matches_order);
    }

    #[test]
    fn small_window_overflows() {
        let err = LatticeOracle::<Fp<2>>::new(3, 4, 13).unwrap().run().unwrap_err();
        assert_eq!(err, Error::WindowOverflow { window: 4 });
    }

    #[test]
    fn window_robustness() {
        let a = LatticeOracle::<Fp<3>>::new(3, 5, 15).unwrap().run().unwrap();
        let b = LatticeOracle::<Fp<3>>::new(3, 6, 18).unwrap().run().unwrap();
        assert_eq!(a.per_class, b.per_class);
        assert_eq!(a.lattice_count, b.lattice_count);
    }
}
