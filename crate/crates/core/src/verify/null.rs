use super::Tolerances;
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::realize::numeric_rank;
use crate::recover::{BundleKind, Side, VectorBundle};
use crate::scalar::{CMat, C64};

/// Fixed generic points used for rank tests.
pub fn sample_points() -> [C64; 3] {
    [C64::new(0.5377, 0.3188), C64::new(-1.3077, 0.4889), C64::new(0.8622, -0.7034)]
}

/// Right nullspace of `m` at relative tolerance `tol`, as orthonormal columns.
pub fn nullspace_at(m: &CMat, tol: f64) -> CMat {
    let (r, c) = m.shape();
    if c == 0 {
        return CMat::zeros(0, 0);
    }
    // Pad with zero rows so the SVD returns a full set of right vectors.
    let sq = if r < c { m.clone().insert_rows(r, c - r, C64::new(0.0, 0.0)) } else { m.clone() };
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| smax == 0.0 || svd.singular_values[k] <= tol * smax)
        .collect();
    let mut out = CMat::zeros(c, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        for i in 0..c {
            out[(i, j)] = vt[(k, i)].conj();
        }
    }
    out
}

/// Vectors `y` with `yᵀ m = 0`, stored as columns.
pub fn left_nullspace_at(m: &CMat, tol: f64) -> CMat {
    nullspace_at(&m.transpose(), tol)
}

/// Maximum rank over three generic points.
pub fn normal_rank(m: &PolyMatrix<C64>, tol: f64) -> usize {
    sample_points().iter().map(|&z| numeric_rank(&m.eval(z), tol)).max().unwrap_or(0)
}

/// Block convolution matrix whose kernel holds the degree `<= d` null vectors.
fn convolution(m: &PolyMatrix<C64>, d: usize) -> CMat {
    let (p, q) = (m.nrows(), m.ncols());
    let k = m.coeffs().len() - 1;
    let mut t = CMat::zeros((d + k + 1) * p, (d + 1) * q);
    for j in 0..=d {
        for (i, c) in m.coeffs().iter().enumerate() {
            t.view_mut(((i + j) * p, j * q), (p, q)).copy_from(c);
        }
    }
    t
}

fn orthonormal_columns(w: &CMat, tol: f64) -> CMat {
    if w.ncols() == 0 {
        return w.clone();
    }
    let svd = w.clone().svd(true, false);
    let u = svd.u.expect("requested left singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > tol * smax).collect();
    CMat::from_fn(w.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Minimal polynomial basis of the right (or left) rational nullspace by a
/// degree sweep over convolution kernels.
pub fn minimal_basis_degree_sweep(m: &PolyMatrix<C64>, side: Side, tol: &Tolerances) -> Result<VectorBundle> {
    let m = match side {
        Side::Right => m.clone().trimmed(),
        Side::Left => m.transpose().trimmed(),
    };
    let q = m.ncols();
    let mut bundle = VectorBundle::new(q, BundleKind::MinimalBasis, side);
    let target = q - normal_rank(&m, tol.rank);
    if target == 0 {
        return Ok(bundle);
    }
    let deg = m.degree().unwrap_or(0);
    let bound = q * deg.max(1) + 1;
    let mut prev_null = 0usize;
    for d in 0..=bound {
        let k = nullspace_at(&convolution(&m, d), tol.rank);
        let count = k.ncols() - prev_null;
        prev_null = k.ncols();
        if count < bundle.len() {
            return Err(Error::Consistency(format!("kernel count dropped at degree {d}")));
        }
        let fresh = count - bundle.len();
        if fresh > 0 {
            let rows = (d + 1) * q;
            let mut shifts: Vec<CMat> = Vec::new();
            for v in &bundle.columns {
                let e = v.degree().unwrap_or(0);
                for s in 0..=d - e {
                    let mut col = CMat::zeros(rows, 1);
                    for (j, c) in v.coeffs().iter().enumerate().take(e + 1) {
                        col.view_mut(((j + s) * q, 0), (q, 1)).copy_from(c);
                    }
                    shifts.push(col);
                }
            }
            let w = if shifts.is_empty() {
                CMat::zeros(rows, 0)
            } else {
                let refs: Vec<_> = shifts.iter().map(|c| c.column(0).into_owned()).collect();
                CMat::from_columns(&refs)
            };
            let qw = orthonormal_columns(&w, tol.rank);
            let proj = if qw.ncols() > 0 { &k - &qw * (qw.adjoint() * &k) } else { k.clone() };
            let svd = proj.svd(true, false);
            let u = svd.u.expect("requested left singular vectors");
            let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
            order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
            for &idx in order.iter().take(fresh) {
                let coeffs: Vec<CMat> = (0..=d).map(|j| CMat::from_fn(q, 1, |i, _| u[(j * q + i, idx)])).collect();
                bundle.columns.push(PolyMatrix::from_coeffs(coeffs)?.trimmed());
            }
        }
        if bundle.len() >= target {
            return Ok(bundle);
        }
    }
    Err(Error::Consistency(format!("degree sweep passed the bound {bound} with {} of {target} vectors", bundle.len())))
}

/// Column-reduced and full rank at generic points.
pub fn is_minimal_basis(b: &VectorBundle, tol: f64) -> bool {
    let p = b.len();
    if p == 0 {
        return true;
    }
    numeric_rank(&b.leading_matrix(), tol) == p && sample_points().iter().all(|&z| numeric_rank(&b.matrix_at(z), tol) == p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn zero_matrix_kernel() {
        let k = nullspace_at(&CMat::zeros(2, 2), 1e-10);
        assert_eq!(k.ncols(), 2);
    }

    #[test]
    fn rank_one_kernel() {
        let m = DMatrix::from_element(2, 2, c(1.0));
        let k = nullspace_at(&m, 1e-10);
        assert_eq!(k.ncols(), 1);
        assert!((k[(0, 0)] + k[(1, 0)]).norm() < 1e-12);
    }

    #[test]
    fn kronecker_block() {
        // [λ, -1] has right minimal basis (1, λ)ᵀ.
        let x = DMatrix::from_row_slice(1, 2, &[c(0.0), c(-1.0)]);
        let y = DMatrix::from_row_slice(1, 2, &[c(1.0), c(0.0)]);
        let b = minimal_basis_degree_sweep(&PolyMatrix::pencil(x, y), Side::Right, &Tolerances::default()).unwrap();
        assert_eq!(b.degrees(), vec![1]);
        let v = &b.columns[0];
        let (c0, c1) = (v.coeff(0), v.coeff(1));
        assert!(c0[(1, 0)].norm() < 1e-12 && c1[(0, 0)].norm() < 1e-12);
        assert!((c0[(0, 0)] - c1[(1, 0)]).norm() < 1e-12);
        assert!(is_minimal_basis(&b, 1e-10));
    }

    #[test]
    fn diagonal_singular() {
        let y = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(0.0)]));
        let b = minimal_basis_degree_sweep(&PolyMatrix::pencil(CMat::zeros(2, 2), y), Side::Right, &Tolerances::default())
            .unwrap();
        assert_eq!(b.degrees(), vec![0]);
        assert!(b.columns[0].coeff(0)[(0, 0)].norm() < 1e-12);
    }
}
