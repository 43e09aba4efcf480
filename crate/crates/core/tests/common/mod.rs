#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::seq::IndexedRandom;
use rand::Rng;
use ratlin::pencils::{Assignment, GfprRecipe};
use ratlin::random;
use ratlin::realize::is_minimal;
use ratlin::structured::{self, StructuredLinearization, SymGfprSpec};
use ratlin::tuples::{admissible, canonical_forms, is_type1_right, simple_admissible, IndexTuple};
use ratlin::{Realization, RealizationKind, Result};

/// Every tuple over `alphabet` of length at most `max_len`.
pub fn words(alphabet: &[i64], max_len: usize) -> Vec<IndexTuple> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<i64>| {
                alphabet.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().map(IndexTuple::new).collect()
}

pub fn permutations(lo: i64, hi: i64) -> Vec<IndexTuple> {
    let items: Vec<i64> = (lo..=hi).collect();
    let mut out = Vec::new();
    permute(&mut items.clone(), 0, &mut out);
    out.into_iter().map(IndexTuple::new).collect()
}

fn permute(v: &mut Vec<i64>, k: usize, out: &mut Vec<Vec<i64>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Valid GFPR recipes of degree `m` for `h` with every decorating tuple of
/// length at most `max_len`.
pub fn gfpr_recipes(m: usize, h: usize, max_len: usize) -> Vec<GfprRecipe<i128>> {
    let (mi, hi) = (m as i64, h as i64);
    let low: Vec<i64> = (0..hi).collect();
    let high: Vec<i64> = (-mi..=-hi - 2).collect();
    let (sw, tw) = (words(&low, max_len), words(&high, max_len));
    let mut out = Vec::new();
    for sigma in permutations(0, hi) {
        for tau in permutations(-mi, -hi - 1) {
            let base = GfprRecipe::<i128>::new(sigma.clone(), tau.clone());
            // Each decoration is checked against its own core tuple first.
            let slot = |pool: &[IndexTuple], set: fn(&mut GfprRecipe<i128>, IndexTuple)| -> Vec<IndexTuple> {
                pool.iter()
                    .filter(|w| {
                        let mut r = base.clone();
                        set(&mut r, (*w).clone());
                        r.validate(m).is_ok()
                    })
                    .cloned()
                    .collect()
            };
            let s1 = slot(&sw, |r, w| r.sigma1 = w);
            let s2 = slot(&sw, |r, w| r.sigma2 = w);
            let t1 = slot(&tw, |r, w| r.tau1 = w);
            let t2 = slot(&tw, |r, w| r.tau2 = w);
            for a in &s1 {
                for b in &s2 {
                    for c in &t1 {
                        for d in &t2 {
                            let mut r = base.clone();
                            r.sigma1 = a.clone();
                            r.sigma2 = b.clone();
                            r.tau1 = c.clone();
                            r.tau2 = d.clone();
                            if r.validate(m).is_ok() {
                                out.push(r);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn matrices(rng: &mut impl Rng, count: usize, n: usize, sym: bool) -> Assignment<i128> {
    Assignment::Explicit((0..count).map(|_| random::nonsingular_matrix(rng, n, sym)).collect())
}

/// The recipe with nonsingular random integer assignments.
pub fn assign(rng: &mut impl Rng, r: &GfprRecipe<i128>, n: usize) -> GfprRecipe<i128> {
    let mut r = r.clone();
    r.x1 = matrices(rng, r.sigma1.len(), n, false);
    r.x2 = matrices(rng, r.sigma2.len(), n, false);
    r.y1 = matrices(rng, r.tau1.len(), n, false);
    r.y2 = matrices(rng, r.tau2.len(), n, false);
    r
}

/// Random minimal realization; `None` after repeated failures.
pub fn minimal_instance(
    rng: &mut impl Rng,
    kind: Option<RealizationKind>,
    m: usize,
    n: usize,
    r: usize,
    nonsingular_leading: bool,
) -> Option<Realization<i128>> {
    for _ in 0..50 {
        let re = random::realization(rng, kind, m, n, r, nonsingular_leading).ok()?;
        if is_minimal(&re, 1e-10).ok()?.minimal {
            return Some(re);
        }
    }
    None
}

/// Uniform choice of a valid random `(m, n, r)` shape.
pub fn shape(rng: &mut impl Rng, max_m: usize, max_n: usize, max_r: usize, even_r: bool) -> (usize, usize, usize) {
    let m = rng.random_range(1..=max_m);
    let n = rng.random_range(1..=max_n);
    let r = if even_r { 2 * rng.random_range(1..=max_r / 2) } else { rng.random_range(1..=max_r) };
    (m, n, r)
}

/// Random valid symmetric spec for degree `m`.
pub fn symmetric_spec(rng: &mut impl Rng, m: usize, n: usize) -> SymGfprSpec<i128> {
    let h = 2 * rng.random_range(0..=(m - 1) / 2);
    let k = (m - h - 1) as i64;
    let t_wh = canonical_forms(h as i64).choose(rng).cloned().unwrap_or_else(IndexTuple::empty);
    let t_vh = canonical_forms(k).choose(rng).cloned().unwrap_or_else(IndexTuple::empty).shift(-(m as i64));
    let mut spec = SymGfprSpec::new(h, t_wh, t_vh);
    spec.x = matrices(rng, spec.t_wh.len(), n, true);
    spec.y = matrices(rng, spec.t_vh.len(), n, true);
    spec
}

/// Random even `h` and admissible `Ind(z + m)` for degree `m`.
pub fn family_indices(rng: &mut impl Rng, m: usize) -> (usize, usize) {
    let h = 2 * rng.random_range(0..=(m - 1) / 2);
    let k = (m - h - 1) as i64;
    let ps: Vec<i64> = (0..=k).filter(|&p| admissible(k, p).is_ok()).collect();
    (h, *ps.choose(rng).expect("some index is admissible") as usize)
}

/// Random type-1 decorations `(t_w, t_z)` for the skew families.
/// Index `0` is allowed only where the matching end coefficient is nonsingular.
pub fn type1_decorations(
    rng: &mut impl Rng,
    m: usize,
    h: usize,
    z_index: usize,
    a0_ok: bool,
    am_ok: bool,
) -> (IndexTuple, IndexTuple) {
    let w = simple_admissible(h as i64).entries;
    let k = (m - h - 1) as i64;
    let z = admissible(k, z_index as i64).expect("admissible").entries;
    let low: Vec<i64> = (0..h as i64).collect();
    let high: Vec<i64> = (0..k).collect();
    let tw: Vec<_> = words(&low, 2).into_iter().filter(|t| is_type1_right(t, &w.rev()) && (a0_ok || !t.contains(0))).collect();
    let tz: Vec<_> = words(&high, 2).into_iter().filter(|t| is_type1_right(t, &z.rev()) && (am_ok || !t.contains(0))).collect();
    let t_w = tw.choose(rng).cloned().unwrap_or_else(IndexTuple::empty);
    let t_z = tz.choose(rng).cloned().unwrap_or_else(IndexTuple::empty).shift(-(m as i64));
    (t_w, t_z)
}

/// A random structured linearization of `re` from the family of its kind.
pub fn structured_instance(rng: &mut impl Rng, re: &Realization<i128>) -> Result<StructuredLinearization<i128>> {
    let m = re.m();
    let n = re.n();
    let kind = re.kind.expect("structured realization");
    if kind == RealizationKind::Symmetric {
        return structured::symmetric_linearization(&symmetric_spec(rng, m, n), re);
    }
    let (h, z) = family_indices(rng, m);
    match kind {
        RealizationKind::TEven => structured::t_even_linearization(h, z, re),
        RealizationKind::Hamiltonian => structured::hamiltonian_linearization(h, z, re),
        RealizationKind::TOdd => structured::t_odd_linearization(h, z, re),
        RealizationKind::SkewSymmetric | RealizationKind::SkewHamiltonian => {
            let ends = [re.p.a(0), re.p.a(m)].map(|a| as_f64(&a).determinant() != 0.0);
            let (t_w, t_z) = type1_decorations(rng, m, h, z, ends[0], ends[1]);
            if kind == RealizationKind::SkewSymmetric {
                structured::skew_symmetric_linearization(h, z, &t_w, &t_z, re)
            } else {
                structured::skew_hamiltonian_linearization(h, z, &t_w, &t_z, re)
            }
        }
        RealizationKind::Symmetric => unreachable!(),
    }
}

pub fn needs_even_r(kind: RealizationKind) -> bool {
    !matches!(kind, RealizationKind::Symmetric | RealizationKind::TOdd)
}

pub fn as_f64(m: &DMatrix<i128>) -> DMatrix<f64> {
    m.map(|v| v as f64)
}
