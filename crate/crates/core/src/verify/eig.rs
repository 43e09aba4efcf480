use super::det::{det_c, det_poly};
use super::Tolerances;
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::scalar::C64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: C64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub finite: Vec<Eigenvalue>,
    /// `size * degree - deg det`.
    pub infinite: usize,
    pub size: usize,
}

impl Spectrum {
    /// Finite eigenvalues listed with repetition.
    pub fn flat(&self) -> Vec<C64> {
        self.finite.iter().flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity)).collect()
    }
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of `c_0 + c_1 z + ... + c_d z^d` by Aberth–Ehrlich iteration.
pub fn polynomial_roots(c: &[C64], max_iter: usize) -> Result<Vec<C64>> {
    let Some(d) = c.iter().rposition(|x| x.norm() > 0.0) else {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    };
    if d == 0 {
        return Ok(vec![]);
    }
    let lead = c[d];
    let c: Vec<C64> = c[..=d].iter().map(|x| x / lead).collect();
    // Exact zero roots are split off before iterating.
    let zeros = c.iter().position(|x| x.norm() > 0.0).unwrap_or(0);
    let c = &c[zeros..];
    let d = c.len() - 1;
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    if d == 0 {
        return Ok(roots);
    }
    let radius = c[0].norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<C64> = (0..d).map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4)).collect();
    let mut done = vec![false; d];
    let mut worst = f64::INFINITY;
    for _ in 0..max_iter {
        worst = 0.0;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..d).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[k] -= w;
            let rel = w.norm() / (1.0 + z[k].norm());
            if rel < 1e-15 {
                done[k] = true;
            }
            worst = worst.max(rel);
        }
        if done.iter().all(|&x| x) || worst < 1e-15 {
            break;
        }
    }
    // Multiple roots converge slowly; accept a moderate final correction.
    if !worst.is_finite() || worst > 1e-6 {
        return Err(Error::Numeric(format!("Aberth iteration did not converge in {max_iter} steps (last step {worst:.3e})")));
    }
    roots.extend(z);
    Ok(roots)
}

/// Newton steps on `det M` using `d/dz log det M = tr(M⁻¹ M')`.
fn polish(m: &PolyMatrix<C64>, dm: &PolyMatrix<C64>, mut z: C64) -> C64 {
    let mut best = det_c(&m.eval(z)).norm();
    for _ in 0..8 {
        let lu = m.eval(z).lu();
        let Some(sol) = lu.solve(&dm.eval(z)) else {
            return z;
        };
        let tr = sol.trace();
        if tr.norm() == 0.0 {
            return z;
        }
        let step = 1.0 / tr;
        let cand = z - step;
        let val = det_c(&m.eval(cand)).norm();
        if val.is_nan() || val >= best {
            return z;
        }
        best = val;
        z = cand;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn cluster(values: Vec<C64>, radius: f64) -> Vec<Eigenvalue> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius * (1.0 + values[i].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for (i, &v) in values.iter().enumerate().take(n) {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(v),
            None => groups.push((r, vec![v])),
        }
    }
    let mut out: Vec<Eigenvalue> = groups
        .into_iter()
        .map(|(_, v)| {
            let k = v.len();
            Eigenvalue { value: v.iter().sum::<C64>() / k as f64, multiplicity: k }
        })
        .collect();
    out.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    out
}

/// Finite eigenvalues of a regular square polynomial matrix (usually a pencil).
pub fn pencil_eigenvalues(m: &PolyMatrix<C64>, tol: &Tolerances) -> Result<Spectrum> {
    let n = m.nrows();
    let dp = det_poly(m, tol)?;
    let Some(deg) = dp.degree() else {
        return Err(Error::Numeric("pencil is singular: determinant vanishes identically".into()));
    };
    let roots = polynomial_roots(&dp.coeffs[..=deg], tol.aberth_max_iter)?;
    let dm = m.derivative();
    let polished: Vec<C64> = roots.into_iter().map(|z| polish(m, &dm, z)).collect();
    let total = n * m.degree().unwrap_or(0);
    Ok(Spectrum { finite: cluster(polished, tol.eig_cluster), infinite: total - deg, size: n })
}

/// Largest distance under greedy nearest pairing, relative to `1 + |z|`;
/// `None` when the multisets differ in size.
pub fn match_eigenvalues(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pool: Vec<C64> = b.to_vec();
    let mut worst = 0.0f64;
    for &x in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm() / (1.0 + x.norm())))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn diagonal_pencil() {
        let x = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0), c(-2.0)]));
        let s = pencil_eigenvalues(&PolyMatrix::pencil(x, DMatrix::identity(2, 2)), &Tolerances::default()).unwrap();
        let v = s.flat();
        assert_eq!(match_eigenvalues(&v, &[c(1.0), c(2.0)]).map(|d| d < 1e-12), Some(true));
        assert_eq!(s.infinite, 0);
    }

    #[test]
    fn rotation_pencil() {
        // det(λI - A) with A = [[0, 1], [-1, 0]].
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]);
        let s = pencil_eigenvalues(&PolyMatrix::pencil(-a, DMatrix::identity(2, 2)), &Tolerances::default()).unwrap();
        let i = C64::new(0.0, 1.0);
        assert!(match_eigenvalues(&s.flat(), &[i, -i]).unwrap() < 1e-12);
    }

    #[test]
    fn one_infinite() {
        let y = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(0.0)]));
        let s = pencil_eigenvalues(&PolyMatrix::pencil(-DMatrix::identity(2, 2), y), &Tolerances::default()).unwrap();
        assert_eq!(s.infinite, 1);
        assert!(match_eigenvalues(&s.flat(), &[c(1.0)]).unwrap() < 1e-12);
    }

    #[test]
    fn aberth_cubic() {
        // (z - 1)(z - 2)(z + 3) = z^3 - 7z + 6
        let r = polynomial_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)], 200).unwrap();
        assert!(match_eigenvalues(&r, &[c(1.0), c(2.0), c(-3.0)]).unwrap() < 1e-12);
    }
}
