use super::Tolerances;
use crate::error::{invalid, Result};
use crate::polymat::{lambda_alpha, omega_alpha, poly_block_transpose, q_matrix, r_matrix, MatrixPolynomial, PolyMatrix};
use crate::scalar::{identity, Ring, C64};
use crate::tuples::{rciss, IndexTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// The explicit unimodular factors `U`, `V` attached to a permutation.
pub fn uv_matrices<T: Ring>(alpha: &IndexTuple, p: &MatrixPolynomial<T>) -> Result<(PolyMatrix<T>, PolyMatrix<T>)> {
    let (m, n) = (p.m(), p.n());
    let rc = rciss(alpha)?;
    let mut u = PolyMatrix::identity(m * n);
    let mut v = PolyMatrix::identity(m * n);
    for j in 0..rc.len() {
        let s = rc.s(j);
        let (c, i) = rc.pairs[j];
        let mut uj = PolyMatrix::identity(m * n);
        for k in (s + c + 1..=s + c + i).rev() {
            uj = uj.mul(&r_matrix(k, p)?);
        }
        for k in (s + 1..=s + c).rev() {
            uj = uj.mul(&poly_block_transpose(&q_matrix(k, m, n)?, n));
        }
        u = uj.mul(&u);
        let mut vj = PolyMatrix::identity(m * n);
        for k in s + 1..=s + c {
            vj = vj.mul(&r_matrix(k, p)?);
        }
        for k in s + c + 1..=s + c + i {
            vj = vj.mul(&q_matrix(k, m, n)?);
        }
        v = v.mul(&vj);
    }
    Ok((u, v))
}

fn rel_residual(a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> f64 {
    let scale = a.iter().chain(b.iter()).fold(1.0f64, |s, x| s.max(x.norm()));
    (a - b).iter().fold(0.0f64, |s, x| s.max(x.norm())) / scale
}

/// Largest relative residual of `U(e1 ⊗ I) = Λ_α` and `(e1ᵀ ⊗ I)V = Ω_α` at the points.
pub fn uv_identity_residual(alpha: &IndexTuple, p: &MatrixPolynomial<C64>, points: &[C64]) -> Result<f64> {
    let (m, n) = (p.m(), p.n());
    let (u, v) = uv_matrices(alpha, p)?;
    let lam = lambda_alpha::<C64>(alpha, n)?;
    let om = omega_alpha::<C64>(alpha, n)?;
    let mut worst = 0.0f64;
    for &z in points {
        let ue = u.eval(z).columns(0, n).into_owned();
        let ve = v.eval(z).rows(0, n).into_owned();
        worst = worst.max(rel_residual(&ue, &lam.eval(z))).max(rel_residual(&ve, &om.eval(z)));
    }
    debug_assert_eq!(u.nrows(), m * n);
    Ok(worst)
}

/// A block strip whose blocks are either zero or `λ^k I_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialStrip {
    pub exps: Vec<Option<usize>>,
}

impl MonomialStrip {
    pub fn random(m: usize, max_exp: usize, rng: &mut impl Rng) -> Self {
        MonomialStrip { exps: (0..m).map(|_| rng.random_bool(0.7).then(|| rng.random_range(0..=max_exp))).collect() }
    }

    fn block(&self, k: usize, n: usize) -> PolyMatrix<i128> {
        match self.exps[k] {
            Some(e) => PolyMatrix::monomial(identity(n), e),
            None => PolyMatrix::zero(n, n),
        }
    }
}

/// Block Gaussian elimination of `diag(I, 0) + XY`; true when
/// `L Z U = diag(I, x_m y_m)` holds exactly.
pub fn monomial_elimination(x: &MonomialStrip, y: &MonomialStrip, n: usize) -> Result<bool> {
    let m = x.exps.len();
    if y.exps.len() != m || m == 0 {
        return invalid("strips must have the same positive length");
    }
    if (0..m - 1).any(|i| x.exps[i].is_some() && y.exps[i].is_some()) {
        return invalid("x_i y_i must vanish for i < m");
    }
    let xs = PolyMatrix::from_blocks(&(0..m).map(|k| vec![x.block(k, n)]).collect::<Vec<_>>());
    let ys = PolyMatrix::from_blocks(&[(0..m).map(|k| y.block(k, n)).collect::<Vec<_>>()]);
    let last = x.block(m - 1, n).mul(&y.block(m - 1, n));
    Ok(eliminate(&xs, &ys, m, n)? == expected(m, n, &last))
}

fn expected(m: usize, n: usize, last: &PolyMatrix<i128>) -> PolyMatrix<i128> {
    let grid: Vec<Vec<PolyMatrix<i128>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match (i == j, i + 1 == m) {
                    (true, true) => last.clone(),
                    (true, false) => PolyMatrix::identity(n),
                    _ => PolyMatrix::zero(n, n),
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_blocks(&grid).trimmed()
}

fn eliminate(xs: &PolyMatrix<i128>, ys: &PolyMatrix<i128>, m: usize, n: usize) -> Result<PolyMatrix<i128>> {
    let mut base = identity::<i128>(m * n);
    for k in (m - 1) * n..m * n {
        base[(k, k)] = 0;
    }
    let z = PolyMatrix::constant(base).add(&xs.mul(ys));
    let zb = |i: usize, j: usize| z.view(i * n, j * n, n, n);
    let grid = |lower: bool| -> Vec<Vec<PolyMatrix<i128>>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            PolyMatrix::identity(n)
                        } else if (i > j) == lower {
                            zb(i, j).scale(-1)
                        } else {
                            PolyMatrix::zero(n, n)
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let l = PolyMatrix::from_blocks(&grid(true));
    let u = PolyMatrix::from_blocks(&grid(false));
    Ok(l.mul(&z).mul(&u).trimmed())
}

/// `T1 (diag(I, 0) + Λ_α Ω_α) T2 = diag(I, λ^{m-1} I)`, checked exactly.
pub fn lambda_omega_elimination(alpha: &IndexTuple, n: usize) -> Result<bool> {
    let m = alpha.len();
    let lam = lambda_alpha::<i128>(alpha, n)?;
    let om = omega_alpha::<i128>(alpha, n)?;
    let last = PolyMatrix::monomial(identity::<i128>(n), m - 1);
    Ok(eliminate(&lam, &om, m, n)? == expected(m, n, &last))
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub alpha: IndexTuple,
    pub uv_residual: f64,
    pub lambda_omega_exact: bool,
    pub elimination_instances: usize,
    pub elimination_exact: bool,
    pub passed: bool,
}

/// Runs the three appendix identities for one permutation.
pub fn appendix_witnesses(alpha: &IndexTuple, p: &MatrixPolynomial<C64>, seed: u64, tol: &Tolerances) -> Result<AppendixReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<C64> =
        (0..5).map(|_| C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
    let uv_residual = uv_identity_residual(alpha, p, &points)?;
    let lambda_omega_exact = lambda_omega_elimination(alpha, p.n())?;
    let m = p.m();
    let mut elimination_exact = true;
    let mut instances = 0;
    while instances < 10 {
        let x = MonomialStrip::random(m, 3, &mut rng);
        let y = MonomialStrip::random(m, 3, &mut rng);
        if (0..m - 1).any(|i| x.exps[i].is_some() && y.exps[i].is_some()) {
            continue;
        }
        elimination_exact &= monomial_elimination(&x, &y, p.n())?;
        instances += 1;
    }
    let passed = uv_residual <= tol.appendix && lambda_omega_exact && elimination_exact;
    Ok(AppendixReport {
        alpha: alpha.clone(),
        uv_residual,
        lambda_omega_exact,
        elimination_instances: instances,
        elimination_exact,
        passed,
    })
}
