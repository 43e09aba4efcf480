//! JSON schemas for problems, recipes, pencils and vector bundles.
//!
//! Scalars are numbers or `[re, im]` pairs. Matrices are arrays of rows.
//! Matrix polynomials are `{"n", "m", "coeffs"}` with each coefficient a
//! row-major list of `n²` scalars. Unknown keys are rejected everywhere.

use crate::error::{Error, Result};
use crate::pencils::{Assignment, BlockPencil, GfprRecipe, Provenance};
use crate::polymat::{MatrixPolynomial, PolyMatrix, StructureTag};
use crate::realize::{Realization, RealizationKind};
use crate::recover::{BundleKind, Side, VectorBundle};
use crate::scalar::{CMat, Ring, C64};
use crate::structured::{CmGrid, SymGfprSpec};
use crate::tuples::IndexTuple;
use crate::verify::Tolerances;
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> C64 {
        match self {
            Entry::Int(v) => C64::new(v as f64, 0.0),
            Entry::Real(v) => C64::new(v, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }

    /// Integer value, when the entry is a real integer small enough to be exact.
    pub fn integer(self) -> Option<i128> {
        let z = self.value();
        let exact = z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 2f64.powi(53);
        exact.then_some(z.re as i128)
    }

    pub fn of<T: Ring>(v: T) -> Self {
        let z = v.to_c64();
        if z.im != 0.0 {
            Entry::Complex([z.re, z.im])
        } else if z.re.fract() == 0.0 && z.re.abs() < 2f64.powi(53) {
            Entry::Int(z.re as i64)
        } else {
            Entry::Real(z.re)
        }
    }
}

pub type MatrixJson = Vec<Vec<Entry>>;

pub fn matrix_json<T: Ring>(m: &DMatrix<T>) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Entry::of(m[(i, j)])).collect()).collect()
}

/// Parse a matrix of known shape; an empty array stands for any `0 x k` or `k x 0` shape.
pub fn matrix_from_json(m: &MatrixJson, rows: usize, cols: usize, what: &str) -> Result<CMat> {
    if m.is_empty() && (rows == 0 || cols == 0) {
        return Ok(CMat::zeros(rows, cols));
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Schema(format!("{what} must be {rows}x{cols}")));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| m[i][j].value()))
}

fn integral(m: &CMat) -> Option<DMatrix<i128>> {
    let mut out = DMatrix::<i128>::zeros(m.nrows(), m.ncols());
    for (o, z) in out.iter_mut().zip(m.iter()) {
        *o = Entry::Complex([z.re, z.im]).integer()?;
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub n: usize,
    pub m: usize,
    pub coeffs: Vec<Vec<Entry>>,
}

impl PolyJson {
    pub fn of<T: Ring>(p: &MatrixPolynomial<T>) -> Self {
        let n = p.n();
        let coeffs = p.coeffs().iter().map(|c| (0..n * n).map(|k| Entry::of(c[(k / n, k % n)])).collect()).collect();
        PolyJson { n, m: p.m(), coeffs }
    }

    pub fn to_c64(&self) -> Result<MatrixPolynomial<C64>> {
        let n = self.n;
        if self.coeffs.len() != self.m + 1 {
            return Err(Error::Schema(format!("degree {} needs {} coefficients, got {}", self.m, self.m + 1, self.coeffs.len())));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.len() != n * n {
                    return Err(Error::Schema(format!("each coefficient needs {} row-major entries", n * n)));
                }
                Ok(CMat::from_fn(n, n, |i, j| c[i * n + j].value()))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixPolynomial::new(coeffs).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// `G(λ) = P(λ) + C(λE - A)⁻¹B` in general form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationJson {
    #[serde(rename = "P")]
    pub p: PolyJson,
    #[serde(rename = "C", default)]
    pub c: MatrixJson,
    #[serde(rename = "E", default)]
    pub e: MatrixJson,
    #[serde(rename = "A", default)]
    pub a: MatrixJson,
    #[serde(rename = "B", default)]
    pub b: MatrixJson,
    #[serde(default)]
    pub structure: Option<RealizationKind>,
}

impl RealizationJson {
    pub fn of<T: Ring>(re: &Realization<T>) -> Self {
        RealizationJson {
            p: PolyJson::of(&re.p),
            c: matrix_json(&re.c),
            e: matrix_json(&re.e),
            a: matrix_json(&re.a),
            b: matrix_json(&re.b),
            structure: re.kind,
        }
    }

    fn parts(&self) -> Result<(MatrixPolynomial<C64>, [CMat; 4])> {
        let p = self.p.to_c64()?;
        let n = p.n();
        let r = self.a.len();
        let c = matrix_from_json(&self.c, n, r, "C")?;
        let e = matrix_from_json(&self.e, r, r, "E")?;
        let a = matrix_from_json(&self.a, r, r, "A")?;
        let b = matrix_from_json(&self.b, r, n, "B")?;
        Ok((p, [c, e, a, b]))
    }

    pub fn to_c64(&self) -> Result<Realization<C64>> {
        let (p, [c, e, a, b]) = self.parts()?;
        finish(Realization::new(p, c, e, a, b)?, self.structure)
    }

    /// Exact copy when every entry is an integer.
    pub fn to_exact(&self) -> Result<Option<Realization<i128>>> {
        let (p, mats) = self.parts()?;
        let coeffs: Option<Vec<_>> = p.coeffs().iter().map(integral).collect();
        let mats: Option<Vec<_>> = mats.iter().map(integral).collect();
        let (Some(coeffs), Some(mats)) = (coeffs, mats) else { return Ok(None) };
        let [c, e, a, b]: [DMatrix<i128>; 4] = mats.try_into().expect("four matrices");
        let re = Realization::new(MatrixPolynomial::new(coeffs)?, c, e, a, b)?;
        finish(re, self.structure).map(Some)
    }

    /// Real copy when every entry is real.
    pub fn to_real(&self) -> Result<Realization<f64>> {
        let re = self.to_c64()?;
        let all_real = re.p.coeffs().iter().chain([&re.c, &re.e, &re.a, &re.b]).all(|m| m.iter().all(|z| z.im == 0.0));
        if !all_real {
            return Err(Error::InvalidInput("expected a real realization".into()));
        }
        Ok(re.map(|z| z.re))
    }
}

fn finish<T: Ring>(re: Realization<T>, kind: Option<RealizationKind>) -> Result<Realization<T>> {
    match kind {
        Some(k) => re.with_kind(k),
        None => Ok(re),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AssignmentJson {
    Named(String),
    Matrices(Vec<MatrixJson>),
}

impl Default for AssignmentJson {
    fn default() -> Self {
        AssignmentJson::Named("trivial".into())
    }
}

impl AssignmentJson {
    pub fn of<T: Ring>(a: &Assignment<T>) -> Self {
        match a {
            Assignment::Trivial => AssignmentJson::default(),
            Assignment::Explicit(v) => AssignmentJson::Matrices(v.iter().map(matrix_json).collect()),
        }
    }

    pub fn to_c64(&self, n: usize) -> Result<Assignment<C64>> {
        match self {
            AssignmentJson::Named(s) if s == "trivial" => Ok(Assignment::Trivial),
            AssignmentJson::Named(s) => Err(Error::Schema(format!("unknown assignment {s:?}; use \"trivial\" or a list of matrices"))),
            AssignmentJson::Matrices(v) => {
                Ok(Assignment::Explicit(v.iter().map(|m| matrix_from_json(m, n, n, "assigned matrix")).collect::<Result<_>>()?))
            }
        }
    }

    pub fn to_exact(&self, n: usize) -> Result<Option<Assignment<i128>>> {
        Ok(match self.to_c64(n)? {
            Assignment::Trivial => Some(Assignment::Trivial),
            Assignment::Explicit(v) => v.iter().map(integral).collect::<Option<Vec<_>>>().map(Assignment::Explicit),
        })
    }
}

/// Recipe for `fp` (`sigma`), `gfp` (`omega0`, `omega1`) or `gfpr` (all the rest).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecipeJson {
    pub sigma: IndexTuple,
    pub tau: IndexTuple,
    pub sigma1: IndexTuple,
    pub sigma2: IndexTuple,
    pub tau1: IndexTuple,
    pub tau2: IndexTuple,
    pub x1: AssignmentJson,
    pub x2: AssignmentJson,
    pub y1: AssignmentJson,
    pub y2: AssignmentJson,
    pub allow_singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<IndexTuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<IndexTuple>,
}

impl RecipeJson {
    pub fn of<T: Ring>(r: &GfprRecipe<T>) -> Self {
        RecipeJson {
            sigma: r.sigma.clone(),
            tau: r.tau.clone(),
            sigma1: r.sigma1.clone(),
            sigma2: r.sigma2.clone(),
            tau1: r.tau1.clone(),
            tau2: r.tau2.clone(),
            x1: AssignmentJson::of(&r.x1),
            x2: AssignmentJson::of(&r.x2),
            y1: AssignmentJson::of(&r.y1),
            y2: AssignmentJson::of(&r.y2),
            allow_singular: r.allow_singular,
            omega0: None,
            omega1: None,
        }
    }

    fn with<T: Ring>(&self, a: [Assignment<T>; 4]) -> GfprRecipe<T> {
        let [x1, x2, y1, y2] = a;
        GfprRecipe {
            sigma: self.sigma.clone(),
            tau: self.tau.clone(),
            sigma1: self.sigma1.clone(),
            sigma2: self.sigma2.clone(),
            tau1: self.tau1.clone(),
            tau2: self.tau2.clone(),
            x1,
            x2,
            y1,
            y2,
            allow_singular: self.allow_singular,
        }
    }

    pub fn to_c64(&self, n: usize) -> Result<GfprRecipe<C64>> {
        Ok(self.with([self.x1.to_c64(n)?, self.x2.to_c64(n)?, self.y1.to_c64(n)?, self.y2.to_c64(n)?]))
    }

    pub fn to_exact(&self, n: usize) -> Result<Option<GfprRecipe<i128>>> {
        let parts = [self.x1.to_exact(n)?, self.x2.to_exact(n)?, self.y1.to_exact(n)?, self.y2.to_exact(n)?];
        let [Some(a), Some(b), Some(c), Some(d)] = parts else { return Ok(None) };
        Ok(Some(self.with([a, b, c, d])))
    }
}

/// Parameters of the structured constructors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StructuredJson {
    pub h: usize,
    /// `Ind(z + m)`.
    pub z_index: usize,
    pub t_wh: IndexTuple,
    pub t_vh: IndexTuple,
    pub x: AssignmentJson,
    pub y: AssignmentJson,
    pub t_w: IndexTuple,
    pub t_z: IndexTuple,
}

impl StructuredJson {
    pub fn sym_spec_c64(&self, n: usize) -> Result<SymGfprSpec<C64>> {
        Ok(SymGfprSpec { h: self.h, t_wh: self.t_wh.clone(), t_vh: self.t_vh.clone(), x: self.x.to_c64(n)?, y: self.y.to_c64(n)? })
    }

    pub fn sym_spec_exact(&self, n: usize) -> Result<Option<SymGfprSpec<i128>>> {
        let (Some(x), Some(y)) = (self.x.to_exact(n)?, self.y.to_exact(n)?) else { return Ok(None) };
        Ok(Some(SymGfprSpec { h: self.h, t_wh: self.t_wh.clone(), t_vh: self.t_vh.clone(), x, y }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact integers when every entry is integral, floating point otherwise.
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptionsJson {
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub mode: Mode,
    pub check_minimal: bool,
    pub grid: CmGrid,
}

/// Input problem: a realization plus optional construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub realization: RealizationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<RecipeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structured: Option<StructuredJson>,
    #[serde(default)]
    pub options: OptionsJson,
}

/// Pencil `X + λY` of size `mn + r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilJson {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    #[serde(rename = "X")]
    pub x: MatrixJson,
    #[serde(rename = "Y")]
    pub y: MatrixJson,
    #[serde(default)]
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<RecipeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi_identity: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureTag>,
    /// Structure holds for `diag(I, J)` times the pencil.
    #[serde(default)]
    pub through_j: bool,
}

impl PencilJson {
    pub fn of<T: Ring>(l: &BlockPencil<T>) -> Self {
        PencilJson {
            m: l.m,
            n: l.n,
            r: l.r,
            x: matrix_json(&l.x),
            y: matrix_json(&l.y),
            provenance: l.provenance.clone(),
            recipe: None,
            quasi_identity: None,
            structure: None,
            through_j: false,
        }
    }

    pub fn to_c64(&self) -> Result<BlockPencil<C64>> {
        let k = self.m * self.n + self.r;
        let x = matrix_from_json(&self.x, k, k, "X")?;
        let y = matrix_from_json(&self.y, k, k, "Y")?;
        BlockPencil::new(x, y, self.m, self.n, self.r, self.provenance.clone())
    }

    pub fn to_exact(&self) -> Result<Option<BlockPencil<i128>>> {
        let l = self.to_c64()?;
        let (Some(x), Some(y)) = (integral(&l.x), integral(&l.y)) else { return Ok(None) };
        BlockPencil::new(x, y, l.m, l.n, l.r, l.provenance).map(Some)
    }
}

/// Columns as coefficient lists of vectors, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub side: Side,
    pub kind: BundleKind,
    pub rows: usize,
    pub columns: Vec<Vec<Vec<Entry>>>,
}

impl BundleJson {
    pub fn of(b: &VectorBundle) -> Self {
        let columns = b
            .columns
            .iter()
            .map(|c| c.coeffs().iter().map(|v| v.iter().map(|&z| Entry::of(z)).collect()).collect())
            .collect();
        BundleJson { side: b.side, kind: b.kind, rows: b.rows, columns }
    }

    pub fn to_bundle(&self) -> Result<VectorBundle> {
        let mut out = VectorBundle::new(self.rows, self.kind, self.side);
        for col in &self.columns {
            if col.is_empty() {
                return Err(Error::Schema("a basis column needs at least one coefficient".into()));
            }
            let coeffs = col
                .iter()
                .map(|v| {
                    if v.len() != self.rows {
                        return Err(Error::Schema(format!("basis vectors must have {} entries", self.rows)));
                    }
                    Ok(CMat::from_iterator(self.rows, 1, v.iter().map(|e| e.value())))
                })
                .collect::<Result<Vec<_>>>()?;
            out.columns.push(PolyMatrix::from_coeffs(coeffs)?);
        }
        Ok(out)
    }
}

/// Parse JSON text, mapping every failure to a schema error.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn render<T: Serialize>(v: &T, pretty: bool) -> Result<String> {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.map_err(|e| Error::Schema(e.to_string()))
}
