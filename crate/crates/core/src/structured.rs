//! Structure-preserving linearizations: block-symmetric GFPRs, symmetric,
//! T-even, T-odd, Hamiltonian, skew-symmetric and skew-Hamiltonian pencils,
//! and the Cauchy–Maslov index of a real symmetric rational matrix.

use crate::error::{Error, Result};
use crate::pencils::{gfpr, nonsingular, Assignment, BlockPencil, GfprRecipe, Path};
use crate::polymat::{block_diag, structure_check, MatrixPolynomial, StructureTag};
use crate::realize::{big_j, eval_g, j_matrix, Realization, RealizationKind};
use crate::scalar::{identity, Ring, C64};
use crate::tuples::{
    admissible, canonical_forms, consecutions, inversions, is_canonical_form, is_type1_right, simple_admissible,
    symmetric_complement, IndexTuple,
};
use crate::verify::{pencil_eigenvalues, Tolerances};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// `ε₁ I_n ⊕ … ⊕ ε_m I_n`, extended by `I_r` when applied to a system pencil.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIdentity {
    pub signs: Vec<i8>,
}

impl QuasiIdentity {
    pub fn m(&self) -> usize {
        self.signs.len()
    }

    /// 1-based parameter `ε_k`.
    pub fn sign(&self, k: usize) -> i8 {
        self.signs[k - 1]
    }

    pub fn scaled(&self, s: i8) -> Self {
        QuasiIdentity { signs: self.signs.iter().map(|&e| e * s).collect() }
    }

    /// `diag(ε₁ I_n, …, ε_m I_n, I_r)`.
    pub fn matrix<T: Ring>(&self, n: usize, r: usize) -> DMatrix<T> {
        let mut q = identity::<T>(self.m() * n + r);
        for (k, &e) in self.signs.iter().enumerate() {
            if e < 0 {
                for i in k * n..(k + 1) * n {
                    q[(i, i)] = -T::one();
                }
            }
        }
        q
    }
}

fn exact_tol<T: Ring>(tol: f64) -> f64 {
    if T::EXACT {
        0.0
    } else {
        tol
    }
}

/// The unique `Q` with `ε₁ = +1` such that `Q L(λ)` has the target structure,
/// where `L` is the leading `mn x mn` part of the pencil.
pub fn find_quasi_identity<T: Ring>(l: &BlockPencil<T>, target: StructureTag, tol: f64) -> Result<QuasiIdentity> {
    let top = l.top_left();
    let (m, n) = (l.m, l.n);
    if m == 0 || m > 24 {
        return Err(Error::InvalidInput(format!("quasi-identity search needs 1 <= m <= 24, got {m}")));
    }
    let tol = exact_tol::<T>(tol);
    let mut found = Vec::new();
    for bits in 0u32..1 << (m - 1) {
        let signs: Vec<i8> = (0..m).map(|k| if k > 0 && bits >> (k - 1) & 1 == 1 { -1 } else { 1 }).collect();
        let q = QuasiIdentity { signs };
        let ql = top.left_mul(&q.matrix::<T>(n, 0));
        if structure_check(&ql.as_poly(), target, tol).is_ok() {
            found.push(q);
        }
    }
    match found.len() {
        0 => Err(Error::Precondition(format!("no quasi-identity makes the pencil {target}"))),
        1 => Ok(found.pop().expect("one candidate")),
        k => Err(Error::Precondition(format!(
            "{k} quasi-identities make the pencil {target}; the input is outside the family with a unique one"
        ))),
    }
}

/// Output of a structured constructor.
#[derive(Debug, Clone)]
pub struct StructuredLinearization<T: Ring> {
    pub pencil: BlockPencil<T>,
    pub recipe: GfprRecipe<T>,
    /// Applied quasi-identity `𝐬Q`; all `+1` for the symmetric family.
    pub q: QuasiIdentity,
    /// Border sits at block `m - alpha` on both sides.
    pub alpha: usize,
    pub tag: StructureTag,
    /// The structure holds for `diag(I, J) 𝕃` rather than `𝕃`.
    pub through_j: bool,
}

impl<T: Ring> StructuredLinearization<T> {
    /// The pencil whose structure is asserted.
    pub fn structured_form(&self) -> Result<BlockPencil<T>> {
        if self.through_j {
            let p = &self.pencil;
            Ok(p.left_mul(&big_j(p.m * p.n, p.r)?))
        } else {
            Ok(self.pencil.clone())
        }
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        let f = self.structured_form()?;
        structure_check(&f.as_poly(), self.tag, exact_tol::<T>(tol)).map_err(|v| {
            Error::Consistency(format!(
                "constructed pencil is not {}: coefficient {} entry ({}, {}) off by {:.3e}",
                self.tag, v.coeff, v.row, v.col, v.residual
            ))
        })
    }
}

/// Parameters of a block-symmetric GFPR.
#[derive(Debug, Clone, PartialEq)]
pub struct SymGfprSpec<T: Ring> {
    pub h: usize,
    pub t_wh: IndexTuple,
    pub t_vh: IndexTuple,
    pub x: Assignment<T>,
    pub y: Assignment<T>,
}

impl<T: Ring> SymGfprSpec<T> {
    pub fn new(h: usize, t_wh: IndexTuple, t_vh: IndexTuple) -> Self {
        SymGfprSpec { h, t_wh, t_vh, x: Assignment::Trivial, y: Assignment::Trivial }
    }
}

fn rev_assignment<T: Ring>(a: &Assignment<T>) -> Assignment<T> {
    match a {
        Assignment::Trivial => Assignment::Trivial,
        Assignment::Explicit(v) => Assignment::Explicit(v.iter().rev().cloned().collect()),
    }
}

/// Explicit assignment for `(c, t)` with `c` trivial and `t` given.
fn joined<T: Ring>(c: &IndexTuple, t: &IndexTuple, a: &Assignment<T>, p: &MatrixPolynomial<T>) -> Result<Assignment<T>> {
    let mut v = Assignment::<T>::Trivial.resolve(c, p)?;
    v.extend(a.resolve(t, p)?);
    Ok(Assignment::Explicit(v))
}

/// `(c₀(w, c_w, rev t), i₀(t, w))` for the simple admissible `w` of `{0:h}`.
/// The two agree exactly when the bordered GFPR can be block symmetric.
pub fn block_symmetry_indices(h: usize, t_wh: &IndexTuple) -> (i64, i64) {
    let w = simple_admissible(h as i64);
    let cw = symmetric_complement(&w);
    let c = consecutions(&IndexTuple::cat(&[&w.entries, &cw, &t_wh.rev()]), 0);
    let i = inversions(&t_wh.concat(&w.entries), 0);
    (c, i)
}

/// Recipe of the block-symmetric GFPR `𝕃_S(h, t_wh, t_vh, 𝒳, 𝒴)`.
pub fn block_symmetric_recipe<T: Ring>(spec: &SymGfprSpec<T>, p: &MatrixPolynomial<T>) -> Result<GfprRecipe<T>> {
    let m = p.m();
    let h = spec.h;
    if h % 2 == 1 {
        let (c, i) = block_symmetry_indices(h, &spec.t_wh);
        return Err(Error::Structural(format!(
            "h = {h} is odd: the border would sit at block {} on the right and {} on the left, so no block-symmetric GFPR exists",
            m as i64 - c,
            m as i64 - i
        )));
    }
    if h + 1 > m {
        return Err(Error::RecipeInvalid(format!("h = {h} must be below m = {m}")));
    }
    let k = (m - h - 1) as i64;
    if !is_canonical_form(&spec.t_wh, h as i64) {
        return Err(Error::RecipeInvalid(format!("{} is not in canonical form for {h}", spec.t_wh)));
    }
    if !is_canonical_form(&spec.t_vh.shift(m as i64), k) {
        return Err(Error::RecipeInvalid(format!("{} + {m} is not in canonical form for {k}", spec.t_vh)));
    }
    let w = simple_admissible(h as i64);
    let cw = symmetric_complement(&w);
    let v = simple_admissible(k);
    let cv = symmetric_complement(&v).shift(-(m as i64));
    let v_h = v.entries.shift(-(m as i64));
    let mut r = GfprRecipe::new(w.entries.clone(), v_h);
    r.sigma1 = spec.t_wh.clone();
    r.sigma2 = cw.concat(&spec.t_wh.rev());
    r.tau1 = spec.t_vh.clone();
    r.tau2 = cv.concat(&spec.t_vh.rev());
    r.x1 = spec.x.clone();
    r.x2 = joined(&cw, &spec.t_wh.rev(), &rev_assignment(&spec.x), p)?;
    r.y1 = spec.y.clone();
    r.y2 = joined(&cv, &spec.t_vh.rev(), &rev_assignment(&spec.y), p)?;
    Ok(r)
}

/// Block-symmetric GFPR of `S(λ)`; the border sits at block `m - α` on both
/// sides with `α = i₀(t_wh, w_h)`.
pub fn block_symmetric_gfpr<T: Ring>(spec: &SymGfprSpec<T>, re: &Realization<T>) -> Result<StructuredLinearization<T>> {
    let recipe = block_symmetric_recipe(spec, &re.p)?;
    let pencil = gfpr(&recipe, re, Path::Both)?;
    let m = re.m();
    let alpha = m - recipe.c_block(m);
    if recipe.c_block(m) != recipe.b_block(m) {
        return Err(Error::Consistency("block-symmetric recipe has mismatched border blocks".into()));
    }
    let q = QuasiIdentity { signs: vec![1; m] };
    let mut out = StructuredLinearization { pencil, recipe, q, alpha, tag: StructureTag::Symmetric, through_j: false };
    out.pencil.provenance.family = "block-symmetric-gfpr".into();
    if (crate::polymat::block_transpose(&out.pencil.top_left().x, re.n()) != out.pencil.top_left().x
        || crate::polymat::block_transpose(&out.pencil.top_left().y, re.n()) != out.pencil.top_left().y)
        && T::EXACT {
            return Err(Error::Consistency("constructed GFPR is not block symmetric".into()));
        }
    Ok(out)
}

fn require_kind<T: Ring>(re: &Realization<T>, kind: RealizationKind) -> Result<()> {
    match re.kind {
        Some(k) if k == kind => re.validate_kind(),
        Some(k) => Err(Error::Structural(format!("expected a {kind:?} realization, got {k:?}"))),
        None => Err(Error::Structural(format!("expected a {kind:?} realization, got a general one"))),
    }
}

fn leading_nonsingular<T: Ring>(p: &MatrixPolynomial<T>) -> bool {
    nonsingular(&p.a(p.m()))
}

fn symmetric_assignment<T: Ring>(a: &Assignment<T>) -> bool {
    match a {
        Assignment::Trivial => true,
        Assignment::Explicit(v) => v.iter().all(|x| x.transpose() == *x || (!T::EXACT && crate::scalar::max_abs(&(x.transpose() - x)) <= 1e-12 * crate::scalar::max_abs(x))),
    }
}

/// Symmetric Rosenbrock strong linearization of a symmetric realization.
pub fn symmetric_linearization<T: Ring>(spec: &SymGfprSpec<T>, re: &Realization<T>) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::Symmetric)?;
    if !symmetric_assignment(&spec.x) || !symmetric_assignment(&spec.y) {
        return Err(Error::Structural("every assigned matrix must be symmetric".into()));
    }
    let m = re.m();
    if m.is_multiple_of(2) && !leading_nonsingular(&re.p) {
        return Err(Error::NotLinearization(format!("m = {m} is even and the leading coefficient is singular")));
    }
    let out = block_symmetric_gfpr(spec, re)?;
    out.check(1e-12)?;
    Ok(out)
}

/// `w`, `c_w`, `z`, `c_z` for even `h` and `Ind(z + m) = p`.
struct Tuples {
    w: IndexTuple,
    cw: IndexTuple,
    z: IndexTuple,
    cz: IndexTuple,
}

fn family_tuples(h: usize, z_index: usize, m: usize) -> Result<Tuples> {
    if h % 2 == 1 {
        return Err(Error::Structural(format!("h = {h} must be even")));
    }
    if h + 1 > m {
        return Err(Error::RecipeInvalid(format!("h = {h} must be below m = {m}")));
    }
    let w = simple_admissible(h as i64);
    let cw = symmetric_complement(&w);
    let zt = admissible((m - h - 1) as i64, z_index as i64).map_err(|e| Error::RecipeInvalid(e.to_string()))?;
    let cz = symmetric_complement(&zt).shift(-(m as i64));
    Ok(Tuples { w: w.entries, cw, z: zt.entries.shift(-(m as i64)), cz })
}

fn check_leading<T: Ring>(re: &Realization<T>, z_index: usize) -> Result<()> {
    if z_index > 0 && !leading_nonsingular(&re.p) {
        return Err(Error::NotLinearization(format!(
            "Ind(z + m) = {z_index} > 0 needs a nonsingular leading coefficient"
        )));
    }
    Ok(())
}

fn finish<T: Ring>(
    recipe: GfprRecipe<T>,
    re: &Realization<T>,
    target: StructureTag,
    through_j: bool,
    family: &str,
) -> Result<StructuredLinearization<T>> {
    let l = gfpr(&recipe, re, Path::Both)?;
    let m = re.m();
    let (cb, bb) = (recipe.c_block(m), recipe.b_block(m));
    if cb != bb {
        return Err(Error::Consistency(format!("border blocks differ: column at {cb}, row at {bb}")));
    }
    let alpha = m - cb;
    let q = find_quasi_identity(&l, target, 1e-12)?;
    let sq = q.scaled(q.sign(m - alpha));
    let mut pencil = l.left_mul(&sq.matrix::<T>(re.n(), re.r()));
    pencil.provenance.family = family.into();
    let out = StructuredLinearization { pencil, recipe, q: sq, alpha, tag: target, through_j };
    out.check(1e-12)?;
    Ok(out)
}

fn even_odd_recipe<T: Ring>(h: usize, z_index: usize, re: &Realization<T>) -> Result<GfprRecipe<T>> {
    let t = family_tuples(h, z_index, re.m())?;
    check_leading(re, z_index)?;
    let mut r = GfprRecipe::new(t.w, t.z);
    r.sigma2 = t.cw;
    r.tau2 = t.cz;
    Ok(r)
}

/// `ℚ𝕃(λ)` for a T-even realization.
pub fn t_even_linearization<T: Ring>(h: usize, z_index: usize, re: &Realization<T>) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::TEven)?;
    finish(even_odd_recipe(h, z_index, re)?, re, StructureTag::TEven, false, "t-even")
}

/// `𝕋(λ)` for a Hamiltonian realization; `diag(I, J) 𝕋` is T-even.
pub fn hamiltonian_linearization<T: Ring>(h: usize, z_index: usize, re: &Realization<T>) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::Hamiltonian)?;
    finish(even_odd_recipe(h, z_index, re)?, re, StructureTag::TEven, true, "hamiltonian")
}

/// `ℚ𝕃(λ)` for a T-odd realization.
pub fn t_odd_linearization<T: Ring>(h: usize, z_index: usize, re: &Realization<T>) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::TOdd)?;
    finish(even_odd_recipe(h, z_index, re)?, re, StructureTag::TOdd, false, "t-odd")
}

fn skew_recipe<T: Ring>(h: usize, z_index: usize, t_w: &IndexTuple, t_z: &IndexTuple, re: &Realization<T>) -> Result<GfprRecipe<T>> {
    let m = re.m();
    let t = family_tuples(h, z_index, m)?;
    check_leading(re, z_index)?;
    if !is_type1_right(t_w, &t.w.rev()) {
        return Err(Error::RecipeInvalid(format!("{t_w} is not a right tuple of type-1 relative to rev(w)")));
    }
    let zm = t.z.shift(m as i64);
    if !is_type1_right(&t_z.shift(m as i64), &zm.rev()) {
        return Err(Error::RecipeInvalid(format!("{t_z} + {m} is not a right tuple of type-1 relative to rev(z + m)")));
    }
    if t_w.contains(0) && !nonsingular(&re.p.a(0)) {
        return Err(Error::NotLinearization("0 appears in t_w but A_0 is singular".into()));
    }
    if t_z.contains(-(m as i64)) && !leading_nonsingular(&re.p) {
        return Err(Error::NotLinearization(format!("-{m} appears in t_z but A_{m} is singular")));
    }
    let mut r = GfprRecipe::new(t.w, t.z);
    r.sigma1 = t_w.rev();
    r.sigma2 = t.cw.concat(t_w);
    r.tau1 = t_z.rev();
    r.tau2 = t.cz.concat(t_z);
    Ok(r)
}

/// `ℚ𝕃(λ)` for a skew-symmetric realization.
pub fn skew_symmetric_linearization<T: Ring>(
    h: usize,
    z_index: usize,
    t_w: &IndexTuple,
    t_z: &IndexTuple,
    re: &Realization<T>,
) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::SkewSymmetric)?;
    finish(skew_recipe(h, z_index, t_w, t_z, re)?, re, StructureTag::SkewSymmetric, false, "skew-symmetric")
}

/// `𝕋(λ)` for a skew-Hamiltonian realization; `diag(I, J) 𝕋` is skew-symmetric.
pub fn skew_hamiltonian_linearization<T: Ring>(
    h: usize,
    z_index: usize,
    t_w: &IndexTuple,
    t_z: &IndexTuple,
    re: &Realization<T>,
) -> Result<StructuredLinearization<T>> {
    require_kind(re, RealizationKind::SkewHamiltonian)?;
    finish(skew_recipe(h, z_index, t_w, t_z, re)?, re, StructureTag::SkewSymmetric, true, "skew-hamiltonian")
}

/// `diag(I_n, J) S(λ)` as a realization: T-even for a Hamiltonian input and
/// skew-symmetric for a skew-Hamiltonian one.
pub fn j_premultiplied<T: Ring>(re: &Realization<T>) -> Result<Realization<T>> {
    let j = j_matrix::<T>(re.r())?;
    let jb = &j * &re.b;
    match re.kind {
        Some(RealizationKind::Hamiltonian) => Realization::t_even(re.p.clone(), jb, j.clone(), &j * &re.a),
        // Stored corner is `-A_native + λI`; the native matrix is `-a`.
        Some(RealizationKind::SkewHamiltonian) => Realization::skew_symmetric(re.p.clone(), jb, j.clone(), -(&j * &re.a)),
        _ => Err(Error::InvalidInput("only Hamiltonian and skew-Hamiltonian realizations are premultiplied by J".into())),
    }
}

/// Realization `L(λ) + X₁₂ (λE - A)^{-1} X₂₁` of the transfer function of a
/// bordered pencil `[[L, X₁₂], [X₂₁, A - λE]]`.
pub fn pencil_transfer_realization<T: Ring>(l: &BlockPencil<T>) -> Result<Realization<T>> {
    let k = l.m * l.n;
    let r = l.r;
    let lp = MatrixPolynomial::new(vec![l.x.view((0, 0), (k, k)).into_owned(), l.y.view((0, 0), (k, k)).into_owned()])?;
    let c = l.x.view((0, k), (k, r)).into_owned();
    let b = l.x.view((k, 0), (r, k)).into_owned();
    let a = l.x.view((k, k), (r, r)).into_owned();
    let e = -l.y.view((k, k), (r, r)).into_owned();
    Realization::new(lp, c, e, a, b)
}

/// Every canonical-form `t_wh` for odd `h`, paired with its two border indices.
pub fn odd_h_obstructions(h: usize) -> Vec<(IndexTuple, i64, i64)> {
    canonical_forms(h as i64)
        .into_iter()
        .map(|t| {
            let (c, i) = block_symmetry_indices(h, &t);
            (t, c, i)
        })
        .collect()
}

/// Grid for the Cauchy–Maslov index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CmGrid {
    /// Offset from a pole is `delta * (1 + |p|)`.
    pub delta: f64,
    /// Upper cap on the blow-up threshold.
    pub bound: f64,
    /// Poles with `|Im p| <= pole_tol * (1 + |p|)` count as real.
    pub pole_tol: f64,
}

impl Default for CmGrid {
    fn default() -> Self {
        CmGrid { delta: 1e-4, bound: 1e6, pole_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpMethod {
    /// Inertia of the residue at a semisimple pole.
    Residue,
    /// Eigenvalue branches on the grid `p ± δ(1 + |p|)`.
    Grid,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleJump {
    pub pole: f64,
    /// Branches jumping `-∞ → +∞` minus those jumping `+∞ → -∞`.
    pub jump: i64,
    pub method: JumpMethod,
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyMaslov {
    pub index: i64,
    pub threshold: f64,
    pub poles: Vec<PoleJump>,
}

fn real_symmetric_eigs(re: &Realization<C64>, x: f64) -> Result<Vec<f64>> {
    let g = eval_g(re, C64::new(x, 0.0))?;
    let gr = g.map(|z| z.re);
    let sym = (&gr + gr.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.iter().copied().collect())
}

/// Near a semisimple real pole `p`, `G(λ) ≈ R / (λ - p)` with
/// `R = BᵀV (VᵀEV)⁻¹ VᵀB` and `V` spanning `ker(A - pE)`; the jump is the
/// signature of `R`. `None` when `VᵀEV` is singular (a higher-order pole).
fn residue_jump(re: &Realization<f64>, p: f64) -> Option<i64> {
    let k = &re.a - &re.e * p;
    let scale = 1.0 + re.a.abs().max() + p.abs() * re.e.abs().max();
    let eig = SymmetricEigen::new(k);
    let cols: Vec<_> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i].abs() <= 1e-8 * scale).collect();
    if cols.is_empty() {
        return None;
    }
    let v = eig.eigenvectors.select_columns(&cols);
    let w = v.transpose() * &re.e * &v;
    let w_eig = SymmetricEigen::new(w.clone());
    if w_eig.eigenvalues.iter().any(|x| x.abs() <= 1e-8 * (1.0 + re.e.abs().max())) {
        return None;
    }
    let vb = v.transpose() * &re.b;
    let r = vb.transpose() * w.try_inverse()? * &vb;
    let r = (&r + r.transpose()) * 0.5;
    let tol = 1e-9 * (1.0 + r.abs().max());
    let ev = SymmetricEigen::new(r).eigenvalues;
    let pos = ev.iter().filter(|&&x| x > tol).count() as i64;
    let neg = ev.iter().filter(|&&x| x < -tol).count() as i64;
    Some(pos - neg)
}

/// Cauchy–Maslov index of `G`: the sum over real poles of the signed count
/// of eigenvalue branches passing through infinity.
///
/// Semisimple poles use the residue signature. Other poles fall back to
/// counting branches beyond `min(bound, 0.01 / delta)` on either side.
pub fn cauchy_maslov_index(re: &Realization<f64>, grid: &CmGrid) -> Result<CauchyMaslov> {
    let sym = |m: &DMatrix<f64>| m.transpose() == *m;
    let real_sym = re.c == re.b.transpose() && sym(&re.e) && sym(&re.a) && re.p.coeffs().iter().all(sym);
    if !real_sym {
        return Err(Error::InvalidInput("the Cauchy–Maslov index needs a real symmetric realization".into()));
    }
    if grid.delta <= 0.0 || grid.bound <= 0.0 {
        return Err(Error::InvalidInput("delta and bound must be positive".into()));
    }
    let rc = re.to_c64();
    let threshold = grid.bound.min(0.01 / grid.delta);
    let mut poles: Vec<f64> = Vec::new();
    if re.r() > 0 {
        let corner = crate::polymat::PolyMatrix::pencil(rc.a.clone(), -rc.e.clone());
        let spec = pencil_eigenvalues(&corner, &Tolerances::default())?;
        for ev in &spec.finite {
            let z = ev.value;
            if z.im.abs() <= grid.pole_tol * (1.0 + z.norm()) {
                poles.push(z.re);
            }
        }
    }
    poles.sort_by(f64::total_cmp);
    poles.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    for w in poles.windows(2) {
        let d = grid.delta * (1.0 + w[0].abs().max(w[1].abs()));
        if w[1] - w[0] < 4.0 * d {
            return Err(Error::Numeric(format!("poles {} and {} are closer than the grid resolution", w[0], w[1])));
        }
    }
    let mut out = Vec::new();
    let mut index = 0;
    for &p in &poles {
        if let Some(jump) = residue_jump(re, p) {
            index += jump;
            out.push(PoleJump { pole: p, jump, method: JumpMethod::Residue });
            continue;
        }
        let d = grid.delta * (1.0 + p.abs());
        let before = real_symmetric_eigs(&rc, p - d)?;
        let after = real_symmetric_eigs(&rc, p + d)?;
        let count = |v: &[f64], up: bool| v.iter().filter(|&&x| if up { x > threshold } else { x < -threshold }).count() as i64;
        let twice = count(&after, true) + count(&before, false) - count(&after, false) - count(&before, true);
        if twice % 2 != 0 {
            return Err(Error::Numeric(format!("unbalanced branch count at pole {p}; refine the grid")));
        }
        index += twice / 2;
        out.push(PoleJump { pole: p, jump: twice / 2, method: JumpMethod::Grid });
    }
    Ok(CauchyMaslov { index, threshold, poles: out })
}

/// Cauchy–Maslov index of the transfer function of a symmetric linearization.
pub fn linearization_cauchy_maslov(l: &StructuredLinearization<f64>, grid: &CmGrid) -> Result<CauchyMaslov> {
    if l.tag != StructureTag::Symmetric {
        return Err(Error::Precondition(format!("the Cauchy–Maslov index needs a symmetric linearization, got {}", l.tag)));
    }
    cauchy_maslov_index(&pencil_transfer_realization(&l.structured_form()?)?, grid)
}

/// `diag(I_{mn}, X)` helper for tests of the J relation.
pub fn with_tail<T: Ring>(k: usize, x: &DMatrix<T>) -> DMatrix<T> {
    block_diag(&[&identity(k), x])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(c: &[f64]) -> MatrixPolynomial<f64> {
        MatrixPolynomial::new(c.iter().map(|&v| DMatrix::from_element(1, 1, v)).collect()).unwrap()
    }

    fn one(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn cm_single_pole() {
        // λ + 1/(λ - 1)
        let re = Realization::symmetric(scalar(&[0.0, 1.0]), one(1.0), one(1.0), one(1.0)).unwrap();
        assert_eq!(cauchy_maslov_index(&re, &CmGrid::default()).unwrap().index, 1);
    }

    #[test]
    fn cm_negative_residue() {
        // λ - 1/(λ - 1) = λ + 1/(-λ + 1): E = -1, A = -1.
        let re = Realization::symmetric(scalar(&[0.0, 1.0]), one(1.0), one(-1.0), one(-1.0)).unwrap();
        assert_eq!(cauchy_maslov_index(&re, &CmGrid::default()).unwrap().index, -1);
    }

    #[test]
    fn cm_two_poles() {
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let re = Realization::symmetric(scalar(&[0.0, 1.0]), b, DMatrix::identity(2, 2), a).unwrap();
        assert_eq!(cauchy_maslov_index(&re, &CmGrid::default()).unwrap().index, 2);
    }

    #[test]
    fn cm_double_pole_uses_grid() {
        // G = λ + 1/(λ - 2)^2 blows up to +∞ on both sides of 2.
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 1.0]);
        let re = Realization::symmetric(scalar(&[0.0, 1.0]), b, e, a).unwrap();
        let cm = cauchy_maslov_index(&re, &CmGrid { pole_tol: 1e-6, ..CmGrid::default() }).unwrap();
        assert_eq!(cm.index, 0);
        assert_eq!(cm.poles.len(), 1);
        assert_eq!(cm.poles[0].method, JumpMethod::Grid);
    }

    #[test]
    fn odd_h_is_never_block_symmetric() {
        for h in [1, 3, 5] {
            for (t, c, i) in odd_h_obstructions(h) {
                assert_ne!(c, i, "h = {h}, t = {t}");
            }
        }
    }

    #[test]
    fn cm_preserved_on_random_instances() {
        let mut g = crate::random::rng(11);
        let mut compared = 0;
        for k in 0..40 {
            let (m, n, r) = (3 + k % 3, 1 + k % 2, 1 + k % 4);
            let re = crate::random::realization(&mut g, Some(RealizationKind::Symmetric), m, n, r, true).unwrap().map(|v| v as f64);
            let h = 2 * (k % 2);
            let l = symmetric_linearization(&SymGfprSpec::new(h, IndexTuple::empty(), IndexTuple::empty()), &re).unwrap();
            let Ok(a) = cauchy_maslov_index(&re, &CmGrid::default()) else { continue };
            let b = linearization_cauchy_maslov(&l, &CmGrid::default()).unwrap();
            assert_eq!(a.index, b.index, "k = {k}: {a:?} vs {b:?}");
            compared += 1;
        }
        assert!(compared >= 30);
    }

    #[test]
    fn quasi_identity_matrix() {
        let q = QuasiIdentity { signs: vec![1, -1] };
        let m: DMatrix<i128> = q.matrix(2, 1);
        assert_eq!(m.diagonal().iter().copied().collect::<Vec<_>>(), vec![1, 1, -1, -1, 1]);
    }
}
