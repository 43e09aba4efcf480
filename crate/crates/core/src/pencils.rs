//! Fiedler pencils, generalized Fiedler pencils and GFPRs of a realization.
//!
//! A pencil written `λ𝕄_τ - 𝕄_σ` is stored as `Y = 𝕄_τ`, `X = -𝕄_σ`, so its
//! value at `λ` is `X + λY`.

use crate::error::{Error, Result};
use crate::polymat::{block_diag, e_kron, elementary_product, et_kron, trivial_assignment, two_by_two};
use crate::polymat::{structure_check, MatrixPolynomial, PolyMatrix, StructureTag, StructureViolation};
use crate::realize::{numeric_rank, Realization};
use crate::scalar::{identity, max_abs, to_cmat, zeros, Ring, C64};
use crate::tuples::{consecutions, inversions, is_permutation_of, is_sip, IndexTuple};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Path {
    Product,
    Bordered,
    #[default]
    Both,
}

/// How a pencil was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub family: String,
    pub path: Option<Path>,
    /// Block row (1-based) holding the `C` column of the border.
    pub c_block: Option<usize>,
    /// Block column (1-based) holding the `B` row of the border.
    pub b_block: Option<usize>,
    #[serde(default)]
    pub note: String,
}

/// Square pencil `X + λY` of size `mn + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPencil<T: Ring> {
    pub x: DMatrix<T>,
    pub y: DMatrix<T>,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub provenance: Provenance,
}

impl<T: Ring> BlockPencil<T> {
    pub fn new(x: DMatrix<T>, y: DMatrix<T>, m: usize, n: usize, r: usize, provenance: Provenance) -> Result<Self> {
        let s = m * n + r;
        if x.shape() != (s, s) || y.shape() != (s, s) {
            return Err(Error::InvalidInput(format!("pencil blocks must be {s}x{s}")));
        }
        Ok(BlockPencil { x, y, m, n, r, provenance })
    }

    pub fn size(&self) -> usize {
        self.m * self.n + self.r
    }

    pub fn as_poly(&self) -> PolyMatrix<T> {
        PolyMatrix::pencil(self.x.clone(), self.y.clone())
    }

    pub fn eval(&self, lambda: T) -> DMatrix<T> {
        &self.x + &self.y * lambda
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> BlockPencil<U> {
        BlockPencil {
            x: self.x.map(f),
            y: self.y.map(f),
            m: self.m,
            n: self.n,
            r: self.r,
            provenance: self.provenance.clone(),
        }
    }

    pub fn to_c64(&self) -> BlockPencil<C64> {
        self.map(|v| v.to_c64())
    }

    /// `Q * self`.
    pub fn left_mul(&self, q: &DMatrix<T>) -> Self {
        BlockPencil { x: q * &self.x, y: q * &self.y, ..self.clone() }
    }

    /// The `mn x mn` leading part.
    pub fn top_left(&self) -> Self {
        let k = self.m * self.n;
        BlockPencil {
            x: self.x.view((0, 0), (k, k)).into_owned(),
            y: self.y.view((0, 0), (k, k)).into_owned(),
            r: 0,
            ..self.clone()
        }
    }

    /// Block `(k, l)` of `X` and `Y`; block `m + 1` is the `r`-sized border.
    pub fn block(&self, k: usize, l: usize) -> (DMatrix<T>, DMatrix<T>) {
        let range = |b: usize| if b <= self.m { ((b - 1) * self.n, self.n) } else { (self.m * self.n, self.r) };
        let (r0, nr) = range(k);
        let (c0, nc) = range(l);
        (self.x.view((r0, c0), (nr, nc)).into_owned(), self.y.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn structure(&self, tag: StructureTag, tol: f64) -> std::result::Result<(), StructureViolation> {
        structure_check(&self.as_poly(), tag, tol)
    }
}

/// Which `n x n` blocks of the leading part are nonzero: `.` for zero, `c`
/// for constant, `l` for a pure `λ` term and `b` for both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPattern {
    pub rows: Vec<String>,
    /// Largest `|k - l|` over nonzero blocks.
    pub bandwidth: usize,
}

impl<T: Ring> BlockPencil<T> {
    pub fn block_pattern(&self) -> BlockPattern {
        let mut bandwidth = 0;
        let rows = (1..=self.m)
            .map(|k| {
                (1..=self.m)
                    .map(|l| {
                        let (x, y) = self.block(k, l);
                        let (cx, cy) = (x.iter().any(|v| !v.is_zero()), y.iter().any(|v| !v.is_zero()));
                        if cx || cy {
                            bandwidth = bandwidth.max(k.abs_diff(l));
                        }
                        match (cx, cy) {
                            (false, false) => '.',
                            (true, false) => 'c',
                            (false, true) => 'l',
                            (true, true) => 'b',
                        }
                    })
                    .collect()
            })
            .collect();
        BlockPattern { rows, bandwidth }
    }
}

/// Matrices assigned to the positions of a tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum Assignment<T: Ring> {
    Trivial,
    Explicit(Vec<DMatrix<T>>),
}

impl<T: Ring> Assignment<T> {
    pub fn resolve(&self, t: &IndexTuple, p: &MatrixPolynomial<T>) -> Result<Vec<DMatrix<T>>> {
        match self {
            Assignment::Trivial => Ok(t.iter().map(|i| trivial_assignment(i, p)).collect()),
            Assignment::Explicit(v) => {
                if v.len() != t.len() {
                    return Err(Error::RecipeInvalid(format!(
                        "tuple {t} has {} positions but {} matrices were assigned",
                        t.len(),
                        v.len()
                    )));
                }
                let n = p.n();
                if v.iter().any(|x| x.shape() != (n, n)) {
                    return Err(Error::RecipeInvalid(format!("assigned matrices must be {n}x{n}")));
                }
                Ok(v.clone())
            }
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> Assignment<U> {
        match self {
            Assignment::Trivial => Assignment::Trivial,
            Assignment::Explicit(v) => Assignment::Explicit(v.iter().map(|x| x.map(f)).collect()),
        }
    }
}

/// Construction order `(σ, τ, σ₁, σ₂, τ₁, τ₂)` with assignments for the
/// decorating tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct GfprRecipe<T: Ring> {
    pub sigma: IndexTuple,
    pub tau: IndexTuple,
    pub sigma1: IndexTuple,
    pub sigma2: IndexTuple,
    pub tau1: IndexTuple,
    pub tau2: IndexTuple,
    pub x1: Assignment<T>,
    pub x2: Assignment<T>,
    pub y1: Assignment<T>,
    pub y2: Assignment<T>,
    /// Skip the nonsingularity test on the assignments at `0` and `-m`.
    pub allow_singular: bool,
}

pub(crate) fn nonsingular<T: Ring>(x: &DMatrix<T>) -> bool {
    numeric_rank(&to_cmat(x), 1e-12) == x.nrows()
}

impl<T: Ring> GfprRecipe<T> {
    /// Undecorated recipe.
    pub fn new(sigma: IndexTuple, tau: IndexTuple) -> Self {
        GfprRecipe {
            sigma,
            tau,
            sigma1: IndexTuple::empty(),
            sigma2: IndexTuple::empty(),
            tau1: IndexTuple::empty(),
            tau2: IndexTuple::empty(),
            x1: Assignment::Trivial,
            x2: Assignment::Trivial,
            y1: Assignment::Trivial,
            y2: Assignment::Trivial,
            allow_singular: false,
        }
    }

    pub fn h(&self) -> usize {
        self.sigma.len().saturating_sub(1)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> GfprRecipe<U> {
        GfprRecipe {
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            sigma1: self.sigma1.clone(),
            sigma2: self.sigma2.clone(),
            tau1: self.tau1.clone(),
            tau2: self.tau2.clone(),
            x1: self.x1.map(f),
            x2: self.x2.map(f),
            y1: self.y1.map(f),
            y2: self.y2.map(f),
            allow_singular: self.allow_singular,
        }
    }

    /// Index-tuple conditions for degree `m`.
    pub fn validate(&self, m: usize) -> Result<()> {
        let bad = |s: String| Err(Error::RecipeInvalid(s));
        if m == 0 {
            return bad("degree must be at least 1".into());
        }
        if self.sigma.is_empty() {
            return bad("sigma must be a nonempty permutation of {0:h}".into());
        }
        let h = self.h() as i64;
        let mi = m as i64;
        if h > mi - 1 {
            return bad(format!("h = {h} exceeds m - 1 = {}", mi - 1));
        }
        if !is_permutation_of(&self.sigma, 0, h) {
            return bad(format!("sigma {} is not a permutation of {{0:{h}}}", self.sigma));
        }
        if !is_permutation_of(&self.tau, -mi, -h - 1) {
            return bad(format!("tau {} is not a permutation of {{-{m}:{}}}", self.tau, -h - 1));
        }
        for (name, t) in [("sigma1", &self.sigma1), ("sigma2", &self.sigma2)] {
            if t.iter().any(|i| i < 0 || i > h - 1) {
                return bad(format!("{name} {t} must use indices from {{0:{}}}", h - 1));
            }
        }
        for (name, t) in [("tau1", &self.tau1), ("tau2", &self.tau2)] {
            if t.iter().any(|i| i < -mi || i > -h - 2) {
                return bad(format!("{name} {t} must use indices from {{-{m}:{}}}", -h - 2));
            }
        }
        let s = IndexTuple::cat(&[&self.sigma1, &self.sigma, &self.sigma2]);
        if !is_sip(&s, h)? {
            return bad(format!("(sigma1, sigma, sigma2) = {s} violates the SIP"));
        }
        let t = IndexTuple::cat(&[&self.tau1, &self.tau, &self.tau2]);
        if !is_sip(&t, mi)? {
            return bad(format!("(tau1, tau, tau2) = {t} violates the SIP"));
        }
        Ok(())
    }

    /// Resolved `(X1, X2, Y1, Y2)`.
    pub fn assignments(&self, p: &MatrixPolynomial<T>) -> Result<[Vec<DMatrix<T>>; 4]> {
        Ok([
            self.x1.resolve(&self.sigma1, p)?,
            self.x2.resolve(&self.sigma2, p)?,
            self.y1.resolve(&self.tau1, p)?,
            self.y2.resolve(&self.tau2, p)?,
        ])
    }

    /// Assignments at positions of `0` and `-m` must be nonsingular.
    pub fn check_nonsingular(&self, p: &MatrixPolynomial<T>) -> Result<()> {
        let m = p.m() as i64;
        let [x1, x2, y1, y2] = self.assignments(p)?;
        let parts = [(&self.sigma1, &x1), (&self.sigma2, &x2), (&self.tau1, &y1), (&self.tau2, &y2)];
        for (t, xs) in parts {
            for (i, x) in t.iter().zip(xs.iter()) {
                if (i == 0 || i == -m) && !nonsingular(x) {
                    return Err(Error::RecipeInvalid(format!("singular matrix assigned to index {i} in {t}")));
                }
            }
        }
        Ok(())
    }

    /// Block row of the `C` column: `m - i_0(σ₁, σ)`.
    pub fn c_block(&self, m: usize) -> usize {
        m - inversions(&self.sigma1.concat(&self.sigma), 0) as usize
    }

    /// Block column of the `B` row: `m - c_0(σ, σ₂)`.
    pub fn b_block(&self, m: usize) -> usize {
        m - consecutions(&self.sigma.concat(&self.sigma2), 0) as usize
    }

    /// `α = (-rev τ_l, σ, -rev τ_r)` where `τ = (τ_l, -m, τ_r)`.
    pub fn alpha(&self, m: usize) -> Result<IndexTuple> {
        let e = self.tau.entries();
        let Some(k) = e.iter().position(|&i| i == -(m as i64)) else {
            return Err(Error::RecipeInvalid(format!("tau {} does not contain -{m}", self.tau)));
        };
        let left = IndexTuple::new(e[..k].to_vec()).rev().neg();
        let right = IndexTuple::new(e[k + 1..].to_vec()).rev().neg();
        Ok(IndexTuple::cat(&[&left, &self.sigma, &right]))
    }
}

fn decorations<T: Ring>(recipe: &GfprRecipe<T>, p: &MatrixPolynomial<T>) -> Result<(DMatrix<T>, DMatrix<T>)> {
    let (m, n) = (p.m(), p.n());
    let [x1, x2, y1, y2] = recipe.assignments(p)?;
    let left = elementary_product(&recipe.tau1, &y1, m, n)? * elementary_product(&recipe.sigma1, &x1, m, n)?;
    let right = elementary_product(&recipe.sigma2, &x2, m, n)? * elementary_product(&recipe.tau2, &y2, m, n)?;
    Ok((left, right))
}

fn prepare<T: Ring>(recipe: &GfprRecipe<T>, p: &MatrixPolynomial<T>) -> Result<()> {
    recipe.validate(p.m())?;
    if !recipe.allow_singular {
        recipe.check_nonsingular(p)?;
    }
    Ok(())
}

/// GFPR `L(λ)` of the polynomial part alone (`r = 0`).
pub fn gfpr_poly<T: Ring>(recipe: &GfprRecipe<T>, p: &MatrixPolynomial<T>) -> Result<BlockPencil<T>> {
    prepare(recipe, p)?;
    let (m, n) = (p.m(), p.n());
    let (left, right) = decorations(recipe, p)?;
    let xs = |t: &IndexTuple| t.iter().map(|i| trivial_assignment(i, p)).collect::<Vec<_>>();
    let mt = elementary_product(&recipe.tau, &xs(&recipe.tau), m, n)?;
    let ms = elementary_product(&recipe.sigma, &xs(&recipe.sigma), m, n)?;
    let y = &left * mt * &right;
    let x = -(&left * ms * &right);
    let provenance = Provenance { family: "gfpr-poly".into(), path: Some(Path::Product), ..Default::default() };
    BlockPencil::new(x, y, m, n, 0, provenance)
}

fn gfpr_product<T: Ring>(recipe: &GfprRecipe<T>, re: &Realization<T>) -> Result<BlockPencil<T>> {
    let (m, n, r) = (re.m(), re.n(), re.r());
    let (left, right) = decorations(recipe, &re.p)?;
    let eye: DMatrix<T> = identity(r);
    let left = block_diag(&[&left, &eye]);
    let right = block_diag(&[&right, &eye]);
    let y = &left * re.fiedler_product_s(&recipe.tau)? * &right;
    let x = -(&left * re.fiedler_product_s(&recipe.sigma)? * &right);
    BlockPencil::new(x, y, m, n, r, Provenance::default())
}

/// `[[L, e_k ⊗ C], [e_lᵀ ⊗ B, A - λE]]` around a polynomial pencil.
pub fn border<T: Ring>(l: &BlockPencil<T>, re: &Realization<T>, c_block: usize, b_block: usize) -> Result<BlockPencil<T>> {
    let (m, n, r) = (re.m(), re.n(), re.r());
    if l.m != m || l.n != n || l.r != 0 {
        return Err(Error::InvalidInput("bordering needs an mn x mn pencil of the same P".into()));
    }
    let col = e_kron(m, c_block, &re.c);
    let row = et_kron(m, b_block, &re.b);
    let x = two_by_two(&l.x, &col, &row, &re.a);
    let y = two_by_two(&l.y, &zeros(m * n, r), &zeros(r, m * n), &(-&re.e));
    let provenance = Provenance { c_block: Some(c_block), b_block: Some(b_block), ..l.provenance.clone() };
    BlockPencil::new(x, y, m, n, r, provenance)
}

fn agree<T: Ring>(a: &DMatrix<T>, b: &DMatrix<T>) -> bool {
    if T::EXACT {
        a == b
    } else {
        max_abs(&(a - b)) <= 1e-12 * max_abs(a).max(max_abs(b)).max(1.0)
    }
}

/// GFPR of `G(λ)` by the elementary product, by bordering the polynomial
/// GFPR, or both with a cross-check.
pub fn gfpr<T: Ring>(recipe: &GfprRecipe<T>, re: &Realization<T>, path: Path) -> Result<BlockPencil<T>> {
    prepare(recipe, &re.p)?;
    let m = re.m();
    let (cb, bb) = (recipe.c_block(m), recipe.b_block(m));
    let bordered = || -> Result<BlockPencil<T>> { border(&gfpr_poly(recipe, &re.p)?, re, cb, bb) };
    let mut out = match path {
        Path::Product => gfpr_product(recipe, re)?,
        Path::Bordered => bordered()?,
        Path::Both => {
            let a = gfpr_product(recipe, re)?;
            let b = bordered()?;
            if !agree(&a.x, &b.x) || !agree(&a.y, &b.y) {
                return Err(Error::Consistency("product and bordered GFPR constructions disagree".into()));
            }
            b
        }
    };
    out.provenance = Provenance {
        family: "gfpr".into(),
        path: Some(path),
        c_block: Some(cb),
        b_block: Some(bb),
        note: format!(
            "sigma={} tau={} sigma1={} sigma2={} tau1={} tau2={}",
            recipe.sigma, recipe.tau, recipe.sigma1, recipe.sigma2, recipe.tau1, recipe.tau2
        ),
    };
    Ok(out)
}

/// Fiedler pencil `λ𝕄^S_{-m} - 𝕄^S_σ`.
pub fn fiedler_pencil<T: Ring>(sigma: &IndexTuple, re: &Realization<T>, path: Path) -> Result<BlockPencil<T>> {
    let m = re.m() as i64;
    if !is_permutation_of(sigma, 0, m - 1) {
        return Err(Error::RecipeInvalid(format!("{sigma} is not a permutation of {{0:{}}}", m - 1)));
    }
    let mut l = gfpr(&GfprRecipe::new(sigma.clone(), IndexTuple::new(vec![-m])), re, path)?;
    l.provenance.family = "fp".into();
    l.provenance.note = format!("sigma={sigma}");
    Ok(l)
}

fn check_partition(omega0: &IndexTuple, omega1: &IndexTuple, m: usize) -> Result<()> {
    let all = omega0.concat(omega1);
    if !is_permutation_of(&all, 0, m as i64) {
        return Err(Error::RecipeInvalid(format!("({omega0}, {omega1}) is not a permutation of {{0:{m}}}")));
    }
    if !omega0.contains(0) || !omega1.contains(m as i64) {
        return Err(Error::RecipeInvalid("only partitions with 0 in omega0 and m in omega1 are supported".into()));
    }
    Ok(())
}

/// Generalized Fiedler pencil `λ𝕄^S_{-ω₁} - 𝕄^S_{ω₀}` with `0 ∈ ω₀`, `m ∈ ω₁`.
pub fn gf_pencil<T: Ring>(omega0: &IndexTuple, omega1: &IndexTuple, re: &Realization<T>) -> Result<BlockPencil<T>> {
    let m = re.m();
    check_partition(omega0, omega1, m)?;
    let y = re.fiedler_product_s(&omega1.neg())?;
    let x = -re.fiedler_product_s(omega0)?;
    let note = format!("omega0={omega0} omega1={omega1}");
    BlockPencil::new(x, y, m, re.n(), re.r(), Provenance { family: "gfp".into(), path: Some(Path::Product), note, ..Default::default() })
}

pub(crate) fn pgf_partition_ok(omega0: &IndexTuple, omega1: &IndexTuple, m: usize) -> Result<()> {
    check_partition(omega0, omega1, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::system_matrix;

    fn im(r: usize, c: usize, v: &[i128]) -> DMatrix<i128> {
        DMatrix::from_row_slice(r, c, v)
    }

    fn sample(m: usize) -> Realization<i128> {
        let coeffs = (0..=m).map(|k| im(2, 2, &[k as i128 + 1, 2, -1, 3 - k as i128])).collect();
        let p = MatrixPolynomial::new(coeffs).unwrap();
        Realization::new(p, im(2, 1, &[1, -2]), im(1, 1, &[2]), im(1, 1, &[3]), im(1, 2, &[-1, 1])).unwrap()
    }

    #[test]
    fn m1_fiedler_is_system_matrix() {
        let re = sample(1);
        let l = fiedler_pencil(&IndexTuple::new(vec![0]), &re, Path::Both).unwrap();
        assert_eq!(l.as_poly(), system_matrix(&re).poly);
    }

    #[test]
    fn companion_borders() {
        let re = sample(3);
        let l = fiedler_pencil(&IndexTuple::new(vec![0, 1, 2]), &re, Path::Both).unwrap();
        assert_eq!(l.provenance.b_block, Some(1));
        assert_eq!(l.provenance.c_block, Some(3));
    }

    #[test]
    fn pgf_reduces_to_fp() {
        let re = sample(3);
        let g = gf_pencil(&IndexTuple::new(vec![2, 0, 1]), &IndexTuple::new(vec![3]), &re).unwrap();
        let f = fiedler_pencil(&IndexTuple::new(vec![2, 0, 1]), &re, Path::Product).unwrap();
        assert_eq!((g.x, g.y), (f.x, f.y));
    }

    #[test]
    fn rejects_bad_recipes() {
        let re = sample(3);
        let mut r = GfprRecipe::new(IndexTuple::new(vec![0, 1]), IndexTuple::new(vec![-3]));
        assert!(matches!(gfpr(&r, &re, Path::Both), Err(Error::RecipeInvalid(_))));
        r.tau = IndexTuple::new(vec![-3, -2]);
        r.sigma2 = IndexTuple::new(vec![0, 0]);
        r.x2 = Assignment::Explicit(vec![identity(2), identity(2)]);
        assert!(matches!(gfpr(&r, &re, Path::Both), Err(Error::RecipeInvalid(_))));
        assert!(GfprRecipe::<i128>::new(IndexTuple::empty(), IndexTuple::new(vec![-3])).validate(3).is_err());
    }

    #[test]
    fn alpha_and_shifts() {
        let r = GfprRecipe::<i128>::new(IndexTuple::new(vec![1, 2, 3, 0]), IndexTuple::new(vec![-4]));
        assert_eq!(r.alpha(4).unwrap(), IndexTuple::new(vec![1, 2, 3, 0]));
        let r = GfprRecipe::<i128>::new(IndexTuple::new(vec![0]), IndexTuple::new(vec![-2, -4, -3, -1]));
        assert_eq!(r.alpha(4).unwrap(), IndexTuple::new(vec![2, 0, 1, 3]));
    }
}
