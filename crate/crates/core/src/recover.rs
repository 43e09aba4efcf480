//! Operation-free recovery of eigenvectors, minimal bases and minimal indices
//! of `S(λ)` and `G(λ)` from those of a GFPR or a PGF pencil.
//!
//! Left bases are stored as columns `y` with `yᵀ L = 0`.

use crate::error::{Error, Result};
use crate::pencils::{pgf_partition_ok, GfprRecipe};
use crate::polymat::PolyMatrix;
use crate::realize::numeric_rank;
use crate::scalar::{CMat, Ring, C64};
use crate::tuples::{consecutions, inversions, total_consecutions, total_inversions, IndexTuple};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleKind {
    EigenvectorBasis,
    MinimalBasis,
}

/// A list of polynomial column vectors of common length.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBundle {
    pub rows: usize,
    pub columns: Vec<PolyMatrix<C64>>,
    pub kind: BundleKind,
    pub side: Side,
}

impl VectorBundle {
    pub fn new(rows: usize, kind: BundleKind, side: Side) -> Self {
        VectorBundle { rows, columns: Vec::new(), kind, side }
    }

    /// Constant columns of `m` as an eigenvector basis.
    pub fn from_matrix(m: &CMat, side: Side) -> Self {
        let columns = (0..m.ncols()).map(|j| PolyMatrix::constant(m.columns(j, 1).into_owned())).collect();
        VectorBundle { rows: m.nrows(), columns, kind: BundleKind::EigenvectorBasis, side }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.degree().unwrap_or(0)).collect()
    }

    pub fn matrix_at(&self, z: C64) -> CMat {
        let mut out = CMat::zeros(self.rows, self.len());
        for (j, c) in self.columns.iter().enumerate() {
            out.set_column(j, &c.eval(z).column(0));
        }
        out
    }

    /// Highest-degree coefficient of every column.
    pub fn leading_matrix(&self) -> CMat {
        let mut out = CMat::zeros(self.rows, self.len());
        for (j, c) in self.columns.iter().enumerate() {
            out.set_column(j, &c.coeff(c.degree().unwrap_or(0)).column(0));
        }
        out
    }

    /// Rows `start..start+len` of each listed range, stacked.
    pub fn select_rows(&self, ranges: &[(usize, usize)]) -> Result<VectorBundle> {
        let total: usize = ranges.iter().map(|r| r.1).sum();
        if ranges.iter().any(|&(s, l)| s + l > self.rows) {
            return Err(Error::InvalidInput(format!("row selection exceeds the {} rows of the bundle", self.rows)));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let coeffs = c
                    .coeffs()
                    .iter()
                    .map(|k| {
                        let mut v = CMat::zeros(total, 1);
                        let mut at = 0;
                        for &(s, l) in ranges {
                            v.view_mut((at, 0), (l, 1)).copy_from(&k.view((s, 0), (l, 1)));
                            at += l;
                        }
                        v
                    })
                    .collect();
                PolyMatrix::from_coeffs(coeffs).map(|p| p.trimmed())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorBundle { rows: total, columns, kind: self.kind, side: self.side })
    }

    /// Full column rank: numeric for eigenvector bases, leading-coefficient
    /// rank for polynomial bases.
    pub fn full_rank(&self, tol: f64) -> bool {
        let m = match self.kind {
            BundleKind::EigenvectorBasis => self.matrix_at(C64::new(0.0, 0.0)),
            BundleKind::MinimalBasis => self.leading_matrix(),
        };
        self.is_empty() || numeric_rank(&m, tol) == self.len()
    }
}

fn extract(z: &VectorBundle, block: usize, m: usize, n: usize, r: usize) -> Result<VectorBundle> {
    if z.rows != m * n + r {
        return Err(Error::InvalidInput(format!("bundle has {} rows, pencil has {}", z.rows, m * n + r)));
    }
    if block == 0 || block > m {
        return Err(Error::InvalidInput(format!("block row {block} outside 1..={m}")));
    }
    let out = z.select_rows(&[((block - 1) * n, n), (m * n, r)])?;
    if !out.full_rank(1e-10) && z.full_rank(1e-10) {
        return Err(Error::Numeric("recovered bundle lost rank".into()));
    }
    Ok(out)
}

/// Block row `m - c₀(σ, σ₂)` (right) or `m - i₀(σ₁, σ)` (left) plus the state rows.
pub fn recover_from_gfpr<T: Ring>(z: &VectorBundle, recipe: &GfprRecipe<T>, m: usize, n: usize, r: usize) -> Result<VectorBundle> {
    recipe.validate(m)?;
    let block = match z.side {
        Side::Right => recipe.b_block(m),
        Side::Left => recipe.c_block(m),
    };
    extract(z, block, m, n, r)
}

/// Block row `m - c₀(ω₀)` (right) or `m - i₀(ω₀)` (left) plus the state rows.
pub fn recover_from_pgf(z: &VectorBundle, omega0: &IndexTuple, omega1: &IndexTuple, m: usize, n: usize, r: usize) -> Result<VectorBundle> {
    pgf_partition_ok(omega0, omega1, m)?;
    let k = match z.side {
        Side::Right => consecutions(omega0, 0),
        Side::Left => inversions(omega0, 0),
    };
    extract(z, m - k as usize, m, n, r)
}

/// Top `n` rows: from `S(λ)` to `G(λ)`.
pub fn recover_s_to_g(z: &VectorBundle, n: usize) -> Result<VectorBundle> {
    z.select_rows(&[(0, n)])
}

/// `α = (rev ω₁ˡ, ω₀, rev ω₁ʳ)` where `ω₁ = (ω₁ˡ, m, ω₁ʳ)`.
pub fn pgf_alpha(omega0: &IndexTuple, omega1: &IndexTuple, m: usize) -> Result<IndexTuple> {
    pgf_partition_ok(omega0, omega1, m)?;
    let e = omega1.entries();
    let k = e.iter().position(|&i| i == m as i64).expect("partition checked");
    let left = IndexTuple::new(e[..k].to_vec()).rev();
    let right = IndexTuple::new(e[k + 1..].to_vec()).rev();
    Ok(IndexTuple::cat(&[&left, omega0, &right]))
}

/// `i(α)` for right indices, `c(α)` for left indices.
pub fn index_shift(alpha: &IndexTuple, side: Side) -> Result<usize> {
    match side {
        Side::Right => total_inversions(alpha),
        Side::Left => total_consecutions(alpha),
    }
}

/// Minimal indices of the pencil mapped to those of `S(λ)`.
pub fn shift_minimal_indices(indices: &[usize], alpha: &IndexTuple, side: Side) -> Result<Vec<usize>> {
    let s = index_shift(alpha, side)?;
    let mut out = indices
        .iter()
        .map(|&e| e.checked_sub(s).ok_or_else(|| Error::Consistency(format!("minimal index {e} is below the shift {s}"))))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}
