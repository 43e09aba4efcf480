//! Matrix polynomials, block utilities, elementary and Fiedler matrices, and
//! the witness matrices `Lambda_alpha`, `Omega_alpha`, `Q_i`, `R_i`.
//!
//! Block indices are 1-based in the public helpers that mirror the block
//! formulas (`block(k, l)` is the block in block row `k`, block column `l`).

use crate::error::{invalid, Result};
use crate::scalar::{identity, is_zero_mat, max_abs, zeros, Ring};
use crate::tuples::{rciss, IndexTuple};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense polynomial matrix `sum_k lambda^k coeffs[k]`, possibly rectangular.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMatrix<T: Ring> {
    rows: usize,
    cols: usize,
    coeffs: Vec<DMatrix<T>>,
}

impl<T: Ring> PolyMatrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, coeffs: vec![zeros(rows, cols)] }
    }

    pub fn constant(m: DMatrix<T>) -> Self {
        PolyMatrix { rows: m.nrows(), cols: m.ncols(), coeffs: vec![m] }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(identity(n))
    }

    /// `lambda^k * m`.
    pub fn monomial(m: DMatrix<T>, k: usize) -> Self {
        let (r, c) = m.shape();
        let mut coeffs = vec![zeros(r, c); k];
        coeffs.push(m);
        PolyMatrix { rows: r, cols: c, coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<DMatrix<T>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return invalid("polynomial matrix needs at least one coefficient");
        };
        let (r, c) = first.shape();
        if coeffs.iter().any(|m| m.shape() != (r, c)) {
            return invalid("coefficient shapes differ");
        }
        Ok(PolyMatrix { rows: r, cols: c, coeffs })
    }

    /// Pencil `x + lambda * y`.
    pub fn pencil(x: DMatrix<T>, y: DMatrix<T>) -> Self {
        Self::from_coeffs(vec![x, y]).expect("pencil coefficients must agree in shape")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[DMatrix<T>] {
        &self.coeffs
    }

    /// Coefficient of `lambda^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> DMatrix<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| zeros(self.rows, self.cols))
    }

    /// Highest power with a nonzero coefficient; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        (0..self.coeffs.len()).rev().find(|&k| !is_zero_mat(&self.coeffs[k]))
    }

    pub fn trimmed(mut self) -> Self {
        let d = self.degree().unwrap_or(0);
        self.coeffs.truncate(d + 1);
        self
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.rows, self.cols);
        }
        let coeffs = self.coeffs[1..].iter().enumerate().map(|(k, c)| c * T::from_i64(k as i64 + 1)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    pub fn eval(&self, lambda: T) -> DMatrix<T> {
        let mut acc = zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> PolyMatrix<U> {
        PolyMatrix { rows: self.rows, cols: self.cols, coeffs: self.coeffs.iter().map(|m| m.map(f)).collect() }
    }

    pub fn transpose(&self) -> Self {
        PolyMatrix { rows: self.cols, cols: self.rows, coeffs: self.coeffs.iter().map(|m| m.transpose()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, coeffs: self.coeffs.iter().map(|m| m * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_zero_mat(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyMatrix { rows: self.rows, cols: other.cols, coeffs }
    }

    /// Left multiplication by a constant matrix.
    pub fn lmul(&self, c: &DMatrix<T>) -> Self {
        PolyMatrix { rows: c.nrows(), cols: self.cols, coeffs: self.coeffs.iter().map(|m| c * m).collect() }
    }

    /// Right multiplication by a constant matrix.
    pub fn rmul(&self, c: &DMatrix<T>) -> Self {
        PolyMatrix { rows: self.rows, cols: c.ncols(), coeffs: self.coeffs.iter().map(|m| m * c).collect() }
    }

    /// Rows `r0..r0+nr`, columns `c0..c0+nc`.
    pub fn view(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        PolyMatrix {
            rows: nr,
            cols: nc,
            coeffs: self.coeffs.iter().map(|m| m.view((r0, c0), (nr, nc)).into_owned()).collect(),
        }
    }

    /// Stack polynomial matrices given as a grid of equal-height rows.
    pub fn from_blocks(grid: &[Vec<PolyMatrix<T>>]) -> Self {
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let rows = heights.iter().sum();
        let cols = widths.iter().sum();
        let len = grid.iter().flatten().map(|b| b.coeffs.len()).max().unwrap_or(1);
        let mut coeffs = vec![zeros(rows, cols); len];
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "ragged block grid");
                for (k, m) in b.coeffs.iter().enumerate() {
                    coeffs[k].view_mut((r0, c0), (b.rows, b.cols)).copy_from(m);
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        PolyMatrix { rows, cols, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }
}

/// `P(lambda) = sum_j lambda^j A_j` with square `n x n` coefficients and
/// nonzero leading coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct MatrixPolynomial<T: Ring> {
    n: usize,
    coeffs: Vec<DMatrix<T>>,
}

impl<T: Ring> MatrixPolynomial<T> {
    pub fn new(coeffs: Vec<DMatrix<T>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return invalid("matrix polynomial needs at least one coefficient");
        };
        let n = first.nrows();
        if coeffs.iter().any(|a| a.shape() != (n, n)) {
            return invalid("coefficients must be square and of equal size");
        }
        if is_zero_mat(coeffs.last().unwrap()) {
            return invalid("leading coefficient must be nonzero");
        }
        Ok(MatrixPolynomial { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree `m`.
    pub fn m(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `A_j`; zero outside `0..=m`.
    pub fn a(&self, j: usize) -> DMatrix<T> {
        self.coeffs.get(j).cloned().unwrap_or_else(|| zeros(self.n, self.n))
    }

    pub fn coeffs(&self) -> &[DMatrix<T>] {
        &self.coeffs
    }

    pub fn eval(&self, lambda: T) -> DMatrix<T> {
        self.as_poly().eval(lambda)
    }

    pub fn as_poly(&self) -> PolyMatrix<T> {
        PolyMatrix { rows: self.n, cols: self.n, coeffs: self.coeffs.clone() }
    }

    /// Reversal `sum_j lambda^j A_{m-j}`.
    pub fn rev(&self) -> Result<Self> {
        let mut c = self.coeffs.clone();
        c.reverse();
        MatrixPolynomial::new(c)
    }

    /// Horner shift `P_k = A_{m-k} + lambda A_{m-k+1} + ... + lambda^k A_m`.
    pub fn horner_shift(&self, k: usize) -> Result<PolyMatrix<T>> {
        let m = self.m();
        if k > m {
            return invalid(format!("Horner shift degree {k} exceeds {m}"));
        }
        Ok(PolyMatrix { rows: self.n, cols: self.n, coeffs: self.coeffs[m - k..].to_vec() })
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> MatrixPolynomial<U> {
        MatrixPolynomial { n: self.n, coeffs: self.coeffs.iter().map(|a| a.map(f)).collect() }
    }
}

/// Copy of the `n x n` block at 1-based block position `(k, l)`.
pub fn block<T: Ring>(m: &DMatrix<T>, n: usize, k: usize, l: usize) -> DMatrix<T> {
    m.view(((k - 1) * n, (l - 1) * n), (n, n)).into_owned()
}

pub fn set_block<T: Ring>(m: &mut DMatrix<T>, n: usize, k: usize, l: usize, b: &DMatrix<T>) {
    m.view_mut(((k - 1) * n, (l - 1) * n), (b.nrows(), b.ncols())).copy_from(b);
}

/// Block transpose of a square block matrix with `n x n` blocks.
pub fn block_transpose<T: Ring>(m: &DMatrix<T>, n: usize) -> DMatrix<T> {
    let k = m.nrows() / n;
    let mut out = zeros(m.ncols(), m.nrows());
    for i in 1..=k {
        for j in 1..=m.ncols() / n {
            set_block(&mut out, n, j, i, &block(m, n, i, j));
        }
    }
    out
}

/// Block transpose of a polynomial block matrix.
pub fn poly_block_transpose<T: Ring>(p: &PolyMatrix<T>, n: usize) -> PolyMatrix<T> {
    PolyMatrix::from_coeffs(p.coeffs.iter().map(|c| block_transpose(c, n)).collect()).expect("shapes agree")
}

/// `e_k ⊗ X` stacked into `m` block rows.
pub fn e_kron<T: Ring>(m: usize, k: usize, x: &DMatrix<T>) -> DMatrix<T> {
    let mut out = zeros(m * x.nrows(), x.ncols());
    out.view_mut(((k - 1) * x.nrows(), 0), x.shape()).copy_from(x);
    out
}

/// `e_k^T ⊗ Y` laid out in `m` block columns.
pub fn et_kron<T: Ring>(m: usize, k: usize, y: &DMatrix<T>) -> DMatrix<T> {
    let mut out = zeros(y.nrows(), m * y.ncols());
    out.view_mut((0, (k - 1) * y.ncols()), y.shape()).copy_from(y);
    out
}

/// Block diagonal matrix.
pub fn block_diag<T: Ring>(parts: &[&DMatrix<T>]) -> DMatrix<T> {
    let r: usize = parts.iter().map(|p| p.nrows()).sum();
    let c: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(r, c);
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        out.view_mut((r0, c0), p.shape()).copy_from(p);
        r0 += p.nrows();
        c0 += p.ncols();
    }
    out
}

/// `[[a, b], [c, d]]` assembled from compatible blocks.
pub fn two_by_two<T: Ring>(a: &DMatrix<T>, b: &DMatrix<T>, c: &DMatrix<T>, d: &DMatrix<T>) -> DMatrix<T> {
    let mut out = zeros(a.nrows() + c.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out.view_mut((a.nrows(), 0), c.shape()).copy_from(c);
    out.view_mut((a.nrows(), a.ncols()), d.shape()).copy_from(d);
    out
}

/// Elementary matrix `M_i(X)` of size `mn x mn`, `i` in `{-m : m-1}`.
pub fn elementary_matrix<T: Ring>(i: i64, x: &DMatrix<T>, m: usize) -> Result<DMatrix<T>> {
    let n = x.nrows();
    if x.ncols() != n {
        return invalid("elementary matrix needs a square block");
    }
    if m == 0 {
        return invalid("degree must be at least 1");
    }
    let mi = m as i64;
    if i < -mi || i > mi - 1 {
        return invalid(format!("index {i} outside {{-{m}:{}}}", m - 1));
    }
    let mut out = identity(m * n);
    let eye: DMatrix<T> = identity(n);
    let zero: DMatrix<T> = zeros(n, n);
    if i == 0 {
        set_block(&mut out, n, m, m, x);
    } else if i == -mi {
        set_block(&mut out, n, 1, 1, x);
    } else {
        let k = (mi - i.abs()) as usize;
        let (a, b, c, d) = if i > 0 { (x, &eye, &eye, &zero) } else { (&zero, &eye, &eye, x) };
        set_block(&mut out, n, k, k, a);
        set_block(&mut out, n, k, k + 1, b);
        set_block(&mut out, n, k + 1, k, c);
        set_block(&mut out, n, k + 1, k + 1, d);
    }
    Ok(out)
}

/// The matrix that makes `M_i(X)` equal to the Fiedler matrix `M^P_i`:
/// `-A_i` for `i >= 0` and `A_{-i}` for `i < 0`.
pub fn trivial_assignment<T: Ring>(i: i64, p: &MatrixPolynomial<T>) -> DMatrix<T> {
    if i >= 0 {
        -p.a(i as usize)
    } else {
        p.a((-i) as usize)
    }
}

/// Fiedler matrix `M^P_i`.
pub fn fiedler_matrix_p<T: Ring>(i: i64, p: &MatrixPolynomial<T>) -> Result<DMatrix<T>> {
    elementary_matrix(i, &trivial_assignment(i, p), p.m())
}

/// Product `M_{t_1}(X_1) M_{t_2}(X_2) ...` of elementary matrices.
pub fn elementary_product<T: Ring>(t: &IndexTuple, xs: &[DMatrix<T>], m: usize, n: usize) -> Result<DMatrix<T>> {
    if t.len() != xs.len() {
        return invalid(format!("tuple {t} has {} entries but {} matrices were assigned", t.len(), xs.len()));
    }
    let mut acc = identity(m * n);
    for (i, x) in t.iter().zip(xs) {
        acc *= elementary_matrix(i, x, m)?;
    }
    Ok(acc)
}

/// Product of Fiedler matrices `M^P_t`.
pub fn fiedler_product_p<T: Ring>(t: &IndexTuple, p: &MatrixPolynomial<T>) -> Result<DMatrix<T>> {
    let xs: Vec<_> = t.iter().map(|i| trivial_assignment(i, p)).collect();
    elementary_product(t, &xs, p.m(), p.n())
}

fn lambda_pow<T: Ring>(n: usize, k: usize) -> PolyMatrix<T> {
    PolyMatrix::monomial(identity(n), k)
}

/// `[I; lambda I; ...; lambda^{i-1} I; 0_{jn}]`, plus `lambda^i I` when `closed`.
fn lambda_block<T: Ring>(i: usize, j: usize, n: usize, closed: bool) -> Vec<PolyMatrix<T>> {
    let mut v: Vec<PolyMatrix<T>> = (0..i).map(|k| lambda_pow(n, k)).collect();
    v.extend((0..j).map(|_| PolyMatrix::zero(n, n)));
    if closed {
        v.push(lambda_pow(n, i));
    }
    v
}

/// `[0_{in}; I; lambda I; ...; lambda^{j-1} I]`, plus `lambda^j I` when `closed`.
fn omega_block<T: Ring>(i: usize, j: usize, n: usize, closed: bool) -> Vec<PolyMatrix<T>> {
    let mut v: Vec<PolyMatrix<T>> = (0..i).map(|_| PolyMatrix::zero(n, n)).collect();
    v.extend((0..j).map(|k| lambda_pow(n, k)));
    if closed {
        v.push(lambda_pow(n, j));
    }
    v
}

fn witness_blocks<T: Ring>(alpha: &IndexTuple, n: usize, lambda_side: bool) -> Result<Vec<PolyMatrix<T>>> {
    let rc = rciss(alpha)?;
    let l = rc.len();
    let mut blocks = Vec::new();
    for (j, &(c, i)) in rc.pairs.iter().enumerate() {
        let shift = if lambda_side { rc.m(j) } else { rc.n(j) };
        let closed = j + 1 == l;
        let part = if lambda_side { lambda_block(c, i, n, closed) } else { omega_block(c, i, n, closed) };
        blocks.extend(part.into_iter().map(|b| b.mul(&lambda_pow(n, shift))));
    }
    Ok(blocks)
}

/// `Lambda_alpha`, an `mn x n` polynomial matrix.
pub fn lambda_alpha<T: Ring>(alpha: &IndexTuple, n: usize) -> Result<PolyMatrix<T>> {
    let blocks = witness_blocks(alpha, n, true)?;
    Ok(PolyMatrix::from_blocks(&blocks.into_iter().map(|b| vec![b]).collect::<Vec<_>>()))
}

/// `Omega_alpha`, an `n x mn` polynomial matrix.
pub fn omega_alpha<T: Ring>(alpha: &IndexTuple, n: usize) -> Result<PolyMatrix<T>> {
    let blocks = witness_blocks(alpha, n, false)?;
    Ok(PolyMatrix::from_blocks(&[blocks]))
}

fn check_qr_index(i: usize, m: usize) -> Result<()> {
    if i == 0 || i >= m {
        return invalid(format!("index {i} outside 1..={}", m.saturating_sub(1)));
    }
    Ok(())
}

/// `Q_i = diag(I_{(i-1)n}, [[I, lambda I], [0, I]], I_{(m-i-1)n})`.
pub fn q_matrix<T: Ring>(i: usize, m: usize, n: usize) -> Result<PolyMatrix<T>> {
    check_qr_index(i, m)?;
    let mut y = zeros(m * n, m * n);
    set_block(&mut y, n, i, i + 1, &identity(n));
    PolyMatrix::from_coeffs(vec![identity(m * n), y])
}

/// `R_i = diag(I_{(i-1)n}, [[0, I], [I, P_i]], I_{(m-i-1)n})`.
pub fn r_matrix<T: Ring>(i: usize, p: &MatrixPolynomial<T>) -> Result<PolyMatrix<T>> {
    let (m, n) = (p.m(), p.n());
    check_qr_index(i, m)?;
    let pi = p.horner_shift(i)?;
    let mut coeffs = vec![zeros(m * n, m * n); pi.coeffs.len()];
    let mut base = identity(m * n);
    set_block(&mut base, n, i, i, &zeros(n, n));
    set_block(&mut base, n, i, i + 1, &identity(n));
    set_block(&mut base, n, i + 1, i, &identity(n));
    set_block(&mut base, n, i + 1, i + 1, &zeros(n, n));
    coeffs[0] = base;
    for (k, c) in pi.coeffs.iter().enumerate() {
        let mut b = block(&coeffs[k], n, i + 1, i + 1);
        b += c;
        set_block(&mut coeffs[k], n, i + 1, i + 1, &b);
    }
    PolyMatrix::from_coeffs(coeffs)
}

/// Structures of the rational-matrix table, applied coefficientwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Symmetric,
    SkewSymmetric,
    /// Hamiltonian rational matrices; T-even polynomials.
    #[serde(alias = "hamiltonian")]
    TEven,
    /// Skew-Hamiltonian rational matrices; T-odd polynomials.
    #[serde(alias = "skew-hamiltonian")]
    TOdd,
    Hermitian,
    SkewHermitian,
    ParaHermitian,
    ParaSkewHermitian,
}

impl StructureTag {
    pub const ALL: [StructureTag; 8] = [
        StructureTag::Symmetric,
        StructureTag::SkewSymmetric,
        StructureTag::TEven,
        StructureTag::TOdd,
        StructureTag::Hermitian,
        StructureTag::SkewHermitian,
        StructureTag::ParaHermitian,
        StructureTag::ParaSkewHermitian,
    ];

    /// `(conjugate?, sign for coefficient j)`: the predicate is
    /// `op(A_j) = sign(j) * A_j` where `op` is transpose or conjugate transpose.
    fn rule(self, j: usize) -> (bool, i32) {
        let alt = if j.is_multiple_of(2) { 1 } else { -1 };
        match self {
            StructureTag::Symmetric => (false, 1),
            StructureTag::SkewSymmetric => (false, -1),
            StructureTag::TEven => (false, alt),
            StructureTag::TOdd => (false, -alt),
            StructureTag::Hermitian => (true, 1),
            StructureTag::SkewHermitian => (true, -1),
            StructureTag::ParaHermitian => (true, alt),
            StructureTag::ParaSkewHermitian => (true, -alt),
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        f.write_str(&s)
    }
}

/// First entry violating a structure predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureViolation {
    pub coeff: usize,
    pub row: usize,
    pub col: usize,
    pub residual: f64,
}

/// Coefficientwise structure predicate. `tol = 0` is exact; otherwise the
/// entrywise slack is `tol * max|A|`.
pub fn structure_check<T: Ring>(p: &PolyMatrix<T>, tag: StructureTag, tol: f64) -> std::result::Result<(), StructureViolation> {
    if p.rows != p.cols {
        return Err(StructureViolation { coeff: 0, row: 0, col: 0, residual: f64::INFINITY });
    }
    let scale = p.coeffs.iter().map(max_abs).fold(0.0, f64::max);
    for (j, a) in p.coeffs.iter().enumerate() {
        let (conj, sign) = tag.rule(j);
        for r in 0..p.rows {
            for c in 0..p.cols {
                let lhs = if conj { a[(c, r)].conj() } else { a[(c, r)] };
                let rhs = if sign > 0 { a[(r, c)] } else { -a[(r, c)] };
                let d = lhs - rhs;
                let bad = if tol == 0.0 { !num_traits::Zero::is_zero(&d) } else { d.magnitude() > tol * scale };
                if bad {
                    return Err(StructureViolation { coeff: j, row: r, col: c, residual: d.magnitude() });
                }
            }
        }
    }
    Ok(())
}

/// Bordered block matrix `[[H, u ⊗ X], [v^T ⊗ Y, Z]]` with an `m x m` grid
/// of `n x n` blocks.
#[derive(Clone, PartialEq, Debug)]
pub struct BlockMatrix<T: Ring> {
    pub n: usize,
    pub grid: DMatrix<T>,
    pub u: Vec<T>,
    pub x: DMatrix<T>,
    pub v: Vec<T>,
    pub y: DMatrix<T>,
    pub z: DMatrix<T>,
}

impl<T: Ring> BlockMatrix<T> {
    /// Unbordered block matrix (`r = 0`).
    pub fn plain(grid: DMatrix<T>, n: usize) -> Self {
        let m = grid.nrows() / n;
        BlockMatrix { n, grid, u: vec![T::zero(); m], x: zeros(n, 0), v: vec![T::zero(); m], y: zeros(0, n), z: zeros(0, 0) }
    }

    pub fn m(&self) -> usize {
        self.grid.nrows() / self.n
    }

    pub fn assemble(&self) -> DMatrix<T> {
        let m = self.m();
        let mut col = zeros(m * self.n, self.x.ncols());
        let mut row = zeros(self.y.nrows(), m * self.n);
        for k in 0..m {
            col.view_mut((k * self.n, 0), self.x.shape()).copy_from(&(&self.x * self.u[k]));
            row.view_mut((0, k * self.n), self.y.shape()).copy_from(&(&self.y * self.v[k]));
        }
        two_by_two(&self.grid, &col, &row, &self.z)
    }

    pub fn block_transpose(&self) -> Self {
        BlockMatrix {
            n: self.n,
            grid: block_transpose(&self.grid, self.n),
            u: self.v.clone(),
            x: self.x.clone(),
            v: self.u.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
        }
    }

    pub fn is_block_symmetric(&self) -> bool {
        block_transpose(&self.grid, self.n) == self.grid && self.u == self.v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::identity;

    fn im(r: usize, c: usize, v: &[i128]) -> DMatrix<i128> {
        DMatrix::from_row_slice(r, c, v)
    }

    #[test]
    fn elementary_forms() {
        let x = im(2, 2, &[1, 2, 3, 4]);
        let m0 = elementary_matrix(0, &x, 3).unwrap();
        assert_eq!(block(&m0, 2, 3, 3), x);
        assert_eq!(block(&m0, 2, 1, 1), identity(2));
        let m1 = elementary_matrix(1, &x, 3).unwrap();
        let mm1 = elementary_matrix(-1, &(-&x), 3).unwrap();
        assert_eq!(&m1 * &mm1, identity(6));
        let s = elementary_matrix(1, &zeros::<i128>(2, 2), 2).unwrap();
        assert_eq!(&s * &s, identity(4));
        assert!(elementary_matrix(3, &x, 3).is_err());
        assert!(elementary_matrix(-4, &x, 3).is_err());
    }

    #[test]
    fn degree_one_fiedler() {
        let p = MatrixPolynomial::new(vec![im(1, 1, &[5]), im(1, 1, &[2])]).unwrap();
        assert_eq!(fiedler_matrix_p(0, &p).unwrap(), im(1, 1, &[-5]));
        assert_eq!(fiedler_matrix_p(-1, &p).unwrap(), im(1, 1, &[2]));
    }

    #[test]
    fn horner_recurrence() {
        let p = MatrixPolynomial::new(vec![im(1, 1, &[1]), im(1, 1, &[2]), im(1, 1, &[3])]).unwrap();
        assert_eq!(p.horner_shift(2).unwrap().eval(2), p.eval(2));
        assert_eq!(p.horner_shift(0).unwrap().eval(7), im(1, 1, &[3]));
        // P_1 = A_1 + lambda A_2 ; P_2 = lambda P_1 + A_0
        let l = 5;
        assert_eq!(p.horner_shift(2).unwrap().eval(l), p.horner_shift(1).unwrap().eval(l) * l + im(1, 1, &[1]));
    }

    #[test]
    fn lambda_omega_simple() {
        let a = IndexTuple::new(vec![0, 1, 2]);
        let l = lambda_alpha::<i128>(&a, 1).unwrap();
        assert_eq!(l.eval(2), im(3, 1, &[1, 2, 4]));
        let o = omega_alpha::<i128>(&a, 1).unwrap();
        assert_eq!(o.eval(2), im(1, 3, &[0, 0, 1]));
        let b = IndexTuple::new(vec![2, 1, 0]);
        assert_eq!(lambda_alpha::<i128>(&b, 1).unwrap().eval(3), im(3, 1, &[0, 0, 1]));
        assert_eq!(omega_alpha::<i128>(&b, 1).unwrap().eval(3), im(1, 3, &[1, 3, 9]));
    }

    #[test]
    fn r_is_block_symmetric() {
        let p = MatrixPolynomial::new(vec![im(2, 2, &[1, 2, 3, 4]), im(2, 2, &[0, 1, 1, 0]), im(2, 2, &[2, 0, 0, 1])]).unwrap();
        let r = r_matrix(1, &p).unwrap();
        assert_eq!(poly_block_transpose(&r, 2), r);
        let q = q_matrix::<i128>(1, 2, 2).unwrap();
        assert_eq!(q.eval(3), im(4, 4, &[1, 0, 3, 0, 0, 1, 0, 3, 0, 0, 1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn structure_predicates() {
        let k = im(2, 2, &[2, 1, 1, 3]);
        let p = PolyMatrix::from_coeffs(vec![k.clone(), zeros(2, 2), identity(2)]).unwrap();
        assert!(structure_check(&p, StructureTag::Symmetric, 0.0).is_ok());
        assert!(structure_check(&p, StructureTag::TEven, 0.0).is_ok());
        assert!(structure_check(&p, StructureTag::TOdd, 0.0).is_err());
        let z = PolyMatrix::<i128>::zero(3, 3);
        for tag in StructureTag::ALL {
            assert!(structure_check(&z, tag, 0.0).is_ok());
        }
    }

    #[test]
    fn bordered_block_transpose_involution() {
        let grid = DMatrix::from_fn(4, 4, |i, j| (i * 4 + j) as i128);
        let b = BlockMatrix { n: 2, grid, u: vec![1, 0], x: im(2, 1, &[1, 2]), v: vec![0, 1], y: im(1, 2, &[3, 4]), z: im(1, 1, &[9]) };
        assert_eq!(b.block_transpose().block_transpose(), b);
        assert!(!b.is_block_symmetric());
    }
}
