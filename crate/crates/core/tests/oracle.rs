//! Values frozen from an independent symbolic computation.

use nalgebra::DMatrix;
use ratlin::pencils::{fiedler_pencil, Path};
use ratlin::polymat::MatrixPolynomial;
use ratlin::realize::system_matrix;
use ratlin::recover::Side;
use ratlin::tuples::{consecutions, inversions, IndexTuple};
use ratlin::verify::{det_poly, det_proportionality, minimal_basis_degree_sweep, Tolerances};
use ratlin::Realization;

fn m2(v: [i128; 4]) -> DMatrix<i128> {
    DMatrix::from_row_slice(2, 2, &v)
}

/// `m = 3, n = 2, r = 1` with `E = 2`, `A = 3`.
fn cubic() -> Realization<i128> {
    let p = MatrixPolynomial::new(vec![m2([1, 2, 0, 1]), m2([0, 1, 1, 1]), m2([2, 0, 1, 1]), m2([1, 1, 0, 1])]).unwrap();
    let c = DMatrix::from_row_slice(2, 1, &[1, 2]);
    let b = DMatrix::from_row_slice(1, 2, &[1, -1]);
    Realization::new(p, c, DMatrix::from_element(1, 1, 2), DMatrix::from_element(1, 1, 3), b).unwrap()
}

#[test]
fn fiedler_pencil_entries() {
    let l = fiedler_pencil(&IndexTuple::new(vec![1, 0, 2]), &cubic(), Path::Both).unwrap();
    #[rustfmt::skip]
    let x = DMatrix::from_row_slice(7, 7, &[
        2, 0, -1, 0, 0, 0, 0,
        1, 1, 0, -1, 0, 0, 0,
        0, 1, 0, 0, 1, 2, 1,
        1, 1, 0, 0, 0, 1, 2,
        -1, 0, 0, 0, 0, 0, 0,
        0, -1, 0, 0, 0, 0, 0,
        0, 0, 0, 0, 1, -1, 3,
    ]);
    let mut y = DMatrix::identity(7, 7);
    y[(0, 1)] = 1;
    y[(6, 6)] = -2;
    assert_eq!(l.x, x);
    assert_eq!(l.y, y);
}

#[test]
fn system_determinant_coefficients() {
    let s = system_matrix(&cubic().to_c64()).poly;
    let d = det_poly(&s, &Tolerances::default()).unwrap();
    let want = [8.0, -5.0, 4.0, 12.0, 0.0, 2.0, -1.0, -2.0];
    assert_eq!(d.degree(), Some(7));
    for (k, w) in want.iter().enumerate() {
        assert!((d.coeffs[k].re - w).abs() < 1e-8 && d.coeffs[k].im.abs() < 1e-8, "coefficient {k}: {}", d.coeffs[k]);
    }
}

#[test]
fn fiedler_determinant_constant_is_one() {
    let re = cubic();
    let s = system_matrix(&re.to_c64()).poly;
    for sigma in [vec![0, 1, 2], vec![2, 1, 0], vec![1, 0, 2], vec![0, 2, 1]] {
        let l = fiedler_pencil(&IndexTuple::new(sigma.clone()), &re, Path::Both).unwrap();
        let p = det_proportionality(&l.to_c64().as_poly(), &s, &Tolerances::default()).unwrap();
        assert!((p.c.re - 1.0).abs() < 1e-8 && p.c.im.abs() < 1e-8, "{sigma:?}: c = {}", p.c);
    }
}

#[test]
fn end_consecutions_and_inversions() {
    let table: [(&[i64], i64, i64); 6] = [
        (&[0, 1, 2, 3], 3, 0),
        (&[3, 2, 1, 0], 0, 3),
        (&[1, 0, 2, 3], 0, 1),
        (&[2, 0, 1, 3], 1, 0),
        (&[0, 3, 1, 2, 4], 2, 0),
        (&[4, 0, 1, 3, 2], 2, 0),
    ];
    for (t, c, i) in table {
        let t = IndexTuple::new(t.to_vec());
        assert_eq!((consecutions(&t, 0), inversions(&t, 0)), (c, i), "{t}");
    }
}

/// `P = diag(λ², 0)`, `C = e₁`, `B = e₁ᵀ`, `E = 1`, `A = 0`.
fn singular_toy() -> Realization<i128> {
    let z = m2([0, 0, 0, 0]);
    let p = MatrixPolynomial::new(vec![z.clone(), z, m2([1, 0, 0, 0])]).unwrap();
    let c = DMatrix::from_row_slice(2, 1, &[1, 0]);
    let b = DMatrix::from_row_slice(1, 2, &[1, 0]);
    Realization::new(p, c, DMatrix::from_element(1, 1, 1), DMatrix::from_element(1, 1, 0), b).unwrap()
}

#[test]
fn singular_toy_minimal_indices() {
    let re = singular_toy();
    let tol = Tolerances::default();
    let s = system_matrix(&re.to_c64()).poly;
    for side in [Side::Right, Side::Left] {
        let b = minimal_basis_degree_sweep(&s, side, &tol).unwrap();
        assert_eq!(b.degrees(), vec![0], "{side:?}");
        let v = b.matrix_at(ratlin::C64::new(0.0, 0.0));
        assert!(v[(0, 0)].norm() < 1e-12 && v[(1, 0)].norm() > 1e-6 && v[(2, 0)].norm() < 1e-12);
    }
    let cases = [(vec![0, 1], [0, 1]), (vec![1, 0], [1, 0])];
    for (sigma, [right, left]) in cases {
        let l = fiedler_pencil(&IndexTuple::new(sigma.clone()), &re, Path::Both).unwrap().to_c64().as_poly();
        let r = minimal_basis_degree_sweep(&l, Side::Right, &tol).unwrap().degrees();
        let lf = minimal_basis_degree_sweep(&l, Side::Left, &tol).unwrap().degrees();
        assert_eq!((r, lf), (vec![right], vec![left]), "{sigma:?}");
    }
}
