use super::Tolerances;
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::realize::numeric_rank;
use crate::scalar::{CMat, C64};
use serde::Serialize;
use std::f64::consts::PI;

/// Interpolated determinant of a square polynomial matrix.
#[derive(Debug, Clone, Serialize)]
pub struct DetPolynomial {
    /// Monomial coefficients, constant term first, length `degree_bound + 1`.
    pub coeffs: Vec<C64>,
    pub degree_bound: usize,
    pub nodes: Vec<C64>,
    /// Largest relative mismatch on the held-out nodes.
    pub holdout_residual: f64,
    vanishes: bool,
    rel: f64,
}

impl DetPolynomial {
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.scale() == 0.0 || self.degree().is_none()
    }

    /// Numeric degree; `None` if the determinant vanishes identically.
    ///
    /// A matrix that is rank deficient at two generic nodes counts as
    /// having zero determinant.
    pub fn degree(&self) -> Option<usize> {
        let s = self.scale();
        if self.vanishes || s == 0.0 {
            return None;
        }
        (0..self.coeffs.len()).rev().find(|&k| self.coeffs[k].norm() > self.rel * s)
    }

    /// Coefficients `c_0..c_d` truncated at the numeric degree.
    pub fn trimmed(&self) -> Vec<C64> {
        match self.degree() {
            Some(d) => self.coeffs[..=d].to_vec(),
            None => vec![],
        }
    }
}

pub(crate) fn det_c(m: &CMat) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Greedy Leja ordering keeps Newton interpolation stable.
fn leja(mut pts: Vec<C64>) -> Vec<C64> {
    let mut out = Vec::with_capacity(pts.len());
    if pts.is_empty() {
        return out;
    }
    out.push(pts.remove(0));
    while !pts.is_empty() {
        let (k, _) = pts
            .iter()
            .enumerate()
            .map(|(k, p)| (k, out.iter().map(|q| (p - q).norm().ln()).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        out.push(pts.remove(k));
    }
    out
}

fn newton_to_monomial(nodes: &[C64], vals: &[C64]) -> Vec<C64> {
    let n = nodes.len();
    let mut dd = vals.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    // Nested form: c = dd[n-1]; c = c*(x - x_k) + dd[k].
    let mut poly = vec![C64::new(0.0, 0.0); n];
    poly[0] = dd[n - 1];
    for (len, k) in (1..).zip((0..n - 1).rev()) {
        let mut next = vec![C64::new(0.0, 0.0); n];
        for i in 0..len {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * nodes[k];
        }
        next[0] += dd[k];
        poly = next;
    }
    poly
}

/// Determinant of a square polynomial matrix by interpolation on the unit
/// circle, validated at five extra nodes.
pub fn det_poly(m: &PolyMatrix<C64>, tol: &Tolerances) -> Result<DetPolynomial> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidInput(format!("determinant of a {}x{} matrix", n, m.ncols())));
    }
    if n > tol.max_det_size {
        return Err(Error::InvalidInput(format!("size {n} exceeds the determinant bound {}", tol.max_det_size)));
    }
    let d = n * m.degree().unwrap_or(0);
    let nodes = leja((0..=d).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / (d + 1) as f64 + 0.1)).collect());
    let vals: Vec<C64> = nodes.iter().map(|&z| det_c(&m.eval(z))).collect();
    let coeffs = newton_to_monomial(&nodes, &vals);
    let sample_scale = vals.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let vanishes = [C64::new(0.31, 0.77), C64::new(-0.52, 0.29)]
        .iter()
        .all(|&z| n > 0 && numeric_rank(&m.eval(z), tol.rank) < n);
    let mut p = DetPolynomial { coeffs, degree_bound: d, nodes, holdout_residual: 0.0, vanishes, rel: tol.det_degree };
    if vanishes {
        // Sampled values are rounding noise; there is nothing to validate.
        p.coeffs.iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
        return Ok(p);
    }
    let mut worst = 0.0f64;
    for k in 0..5 {
        let z = C64::from_polar(0.7 + 0.05 * k as f64, 1.3 + 1.1 * k as f64);
        let direct = det_c(&m.eval(z));
        let scale = sample_scale.max(direct.norm());
        if scale == 0.0 {
            continue;
        }
        worst = worst.max((p.eval(z) - direct).norm() / scale);
    }
    p.holdout_residual = worst;
    if worst > tol.holdout {
        return Err(Error::Numeric(format!("determinant interpolation failed held-out check: residual {worst:.3e}")));
    }
    Ok(p)
}

/// `det L = c det S` test on monomial coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct Proportionality {
    pub c: C64,
    pub deviation: f64,
    pub degree_l: usize,
    pub degree_s: usize,
}

impl Proportionality {
    pub fn passes(&self, tol: f64) -> bool {
        self.degree_l == self.degree_s && self.deviation <= tol
    }
}

pub fn det_proportionality(l: &PolyMatrix<C64>, s: &PolyMatrix<C64>, tol: &Tolerances) -> Result<Proportionality> {
    let dl = det_poly(l, tol)?;
    let ds = det_poly(s, tol)?;
    let (Some(degree_l), Some(degree_s)) = (dl.degree(), ds.degree()) else {
        return Err(Error::Numeric("determinant vanishes identically; use the singular checks".into()));
    };
    let len = dl.coeffs.len().max(ds.coeffs.len());
    let get = |v: &[C64], k: usize| v.get(k).copied().unwrap_or_default();
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for k in 0..len {
        let (a, b) = (get(&dl.coeffs, k), get(&ds.coeffs, k));
        num += b.conj() * a;
        den += b.norm_sqr();
    }
    let c = num / den;
    let scale = dl.coeffs.iter().fold(0.0f64, |a, x| a.max(x.norm()));
    let deviation =
        (0..len).map(|k| (get(&dl.coeffs, k) - c * get(&ds.coeffs, k)).norm()).fold(0.0, f64::max) / scale;
    Ok(Proportionality { c, deviation, degree_l, degree_s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn lambda_identity() {
        let p = PolyMatrix::pencil(DMatrix::zeros(2, 2), DMatrix::identity(2, 2));
        let d = det_poly(&p, &Tolerances::default()).unwrap();
        assert_eq!(d.degree(), Some(2));
        assert!((d.coeffs[2] - c(1.0)).norm() < 1e-12);
        assert!(d.coeffs[0].norm() < 1e-12 && d.coeffs[1].norm() < 1e-12);
    }

    #[test]
    fn toy_system_matrix() {
        // [[λ, 1], [1, -λ]] has determinant -λ² - 1.
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let d = det_poly(&PolyMatrix::pencil(x, y), &Tolerances::default()).unwrap();
        let t = d.trimmed();
        assert_eq!(t.len(), 3);
        assert!((t[0] + 1.0).norm() < 1e-12 && t[1].norm() < 1e-12 && (t[2] + 1.0).norm() < 1e-12);
    }

    #[test]
    fn zero_determinant() {
        let x = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(2.0), c(2.0), c(2.0), c(2.0)]);
        let d = det_poly(&PolyMatrix::pencil(x, y), &Tolerances::default()).unwrap();
        assert!(d.is_zero());
    }
}
