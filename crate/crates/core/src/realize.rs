//! Realizations `G(lambda) = P(lambda) + C (lambda E - A)^{-1} B` and their
//! system matrices `[[P, C], [B, A - lambda E]]`.
//!
//! Every realization is stored in this general form. The structured
//! constructors translate their native ingredients, e.g. a T-odd system
//! matrix `[[P, -B^T], [B, lambda I - A]]` is stored with `C = -B^T`,
//! `E = -I` and `A := -A`.

use crate::error::{invalid, Error, Result};
use crate::polymat::{block_diag, structure_check, two_by_two, MatrixPolynomial, PolyMatrix, StructureTag};
use crate::scalar::{identity, to_cmat, zeros, CMat, Ring, C64};
use crate::verify;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Native form a realization was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationKind {
    /// `C = B^T`, `E`, `A` symmetric.
    Symmetric,
    /// `C = B^T`, `lambda E - A` T-even.
    TEven,
    /// `E = I`, `JA` symmetric, `C = B^T J^T`.
    Hamiltonian,
    /// `[[P, -B^T], [B, lambda I - A]]` with `A` skew-symmetric.
    TOdd,
    /// `[[P, -B^T], [B, lambda E - A]]` with `E`, `A` skew-symmetric.
    SkewSymmetric,
    /// `[[P, -B^T J^T], [B, lambda I - A]]` with `JA` skew-symmetric.
    SkewHamiltonian,
}

impl RealizationKind {
    pub const ALL: [RealizationKind; 6] = [
        RealizationKind::Symmetric,
        RealizationKind::TEven,
        RealizationKind::Hamiltonian,
        RealizationKind::TOdd,
        RealizationKind::SkewSymmetric,
        RealizationKind::SkewHamiltonian,
    ];

    /// Structure of `P` (and of `G`) implied by the kind.
    pub fn polynomial_tag(self) -> StructureTag {
        match self {
            RealizationKind::Symmetric => StructureTag::Symmetric,
            RealizationKind::TEven | RealizationKind::Hamiltonian => StructureTag::TEven,
            RealizationKind::TOdd => StructureTag::TOdd,
            RealizationKind::SkewSymmetric | RealizationKind::SkewHamiltonian => StructureTag::SkewSymmetric,
        }
    }

    /// True when the structure is read through `diag(I, J)`.
    pub fn uses_j(self) -> bool {
        matches!(self, RealizationKind::Hamiltonian | RealizationKind::SkewHamiltonian)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Realization<T: Ring> {
    pub p: MatrixPolynomial<T>,
    pub c: DMatrix<T>,
    pub e: DMatrix<T>,
    pub a: DMatrix<T>,
    pub b: DMatrix<T>,
    pub kind: Option<RealizationKind>,
}

/// `J = [[0, I_l], [-I_l, 0]]`.
pub fn j_matrix<T: Ring>(r: usize) -> Result<DMatrix<T>> {
    if !r.is_multiple_of(2) {
        return invalid(format!("J needs an even size, got {r}"));
    }
    let l = r / 2;
    let mut j = zeros(r, r);
    for k in 0..l {
        j[(k, l + k)] = T::one();
        j[(l + k, k)] = -T::one();
    }
    Ok(j)
}

/// `diag(I_k, J_r)`.
pub fn big_j<T: Ring>(k: usize, r: usize) -> Result<DMatrix<T>> {
    Ok(block_diag(&[&identity(k), &j_matrix(r)?]))
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Structural(what.to_string()))
    }
}

fn is_sym<T: Ring>(m: &DMatrix<T>) -> bool {
    m.transpose() == *m
}

fn is_skew<T: Ring>(m: &DMatrix<T>) -> bool {
    m.transpose() == -m
}

fn poly_has<T: Ring>(p: &MatrixPolynomial<T>, tag: StructureTag) -> bool {
    structure_check(&p.as_poly(), tag, 0.0).is_ok()
}

impl<T: Ring> Realization<T> {
    /// General realization; shapes are validated, structure is not.
    pub fn new(p: MatrixPolynomial<T>, c: DMatrix<T>, e: DMatrix<T>, a: DMatrix<T>, b: DMatrix<T>) -> Result<Self> {
        let n = p.n();
        let r = a.nrows();
        if a.shape() != (r, r) || e.shape() != (r, r) {
            return invalid("A and E must be square of equal size");
        }
        if c.shape() != (n, r) {
            return invalid(format!("C must be {n}x{r}, got {}x{}", c.nrows(), c.ncols()));
        }
        if b.shape() != (r, n) {
            return invalid(format!("B must be {r}x{n}, got {}x{}", b.nrows(), b.ncols()));
        }
        Ok(Realization { p, c, e, a, b, kind: None })
    }

    /// Realization with no state (`r = 0`).
    pub fn polynomial(p: MatrixPolynomial<T>) -> Self {
        let n = p.n();
        Realization { p, c: zeros(n, 0), e: zeros(0, 0), a: zeros(0, 0), b: zeros(0, n), kind: None }
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn m(&self) -> usize {
        self.p.m()
    }

    pub fn r(&self) -> usize {
        self.a.nrows()
    }

    pub fn with_kind(mut self, kind: RealizationKind) -> Result<Self> {
        self.kind = Some(kind);
        self.validate_kind()?;
        Ok(self)
    }

    /// `C = B^T`, `E = E^T`, `A = A^T`, `P` symmetric.
    pub fn symmetric(p: MatrixPolynomial<T>, b: DMatrix<T>, e: DMatrix<T>, a: DMatrix<T>) -> Result<Self> {
        let c = b.transpose();
        Realization::new(p, c, e, a, b)?.with_kind(RealizationKind::Symmetric)
    }

    /// `C = B^T`, `E^T = -E`, `A^T = A`, `P` T-even.
    pub fn t_even(p: MatrixPolynomial<T>, b: DMatrix<T>, e: DMatrix<T>, a: DMatrix<T>) -> Result<Self> {
        let c = b.transpose();
        Realization::new(p, c, e, a, b)?.with_kind(RealizationKind::TEven)
    }

    /// `E = I`, `r = 2l`, `JA` symmetric, `C = B^T J^T`, `P` T-even.
    pub fn hamiltonian(p: MatrixPolynomial<T>, b: DMatrix<T>, a: DMatrix<T>) -> Result<Self> {
        let r = a.nrows();
        let j = j_matrix::<T>(r)?;
        let c = b.transpose() * j.transpose();
        Realization::new(p, c, identity(r), a, b)?.with_kind(RealizationKind::Hamiltonian)
    }

    /// Native `[[P, -B^T], [B, lambda I - A_s]]` with `A_s` skew-symmetric.
    pub fn t_odd(p: MatrixPolynomial<T>, b: DMatrix<T>, a_skew: DMatrix<T>) -> Result<Self> {
        let r = a_skew.nrows();
        let c = -b.transpose();
        Realization::new(p, c, -identity::<T>(r), -a_skew, b)?.with_kind(RealizationKind::TOdd)
    }

    /// Native `[[P, -B^T], [B, lambda E_s - A_s]]` with `E_s`, `A_s` skew-symmetric.
    pub fn skew_symmetric(p: MatrixPolynomial<T>, b: DMatrix<T>, e_skew: DMatrix<T>, a_skew: DMatrix<T>) -> Result<Self> {
        let c = -b.transpose();
        Realization::new(p, c, -e_skew, -a_skew, b)?.with_kind(RealizationKind::SkewSymmetric)
    }

    /// Native `[[P, -B^T J^T], [B, lambda I - A]]` with `JA` skew-symmetric.
    pub fn skew_hamiltonian(p: MatrixPolynomial<T>, b: DMatrix<T>, a: DMatrix<T>) -> Result<Self> {
        let r = a.nrows();
        let j = j_matrix::<T>(r)?;
        let c = -(b.transpose() * j.transpose());
        Realization::new(p, c, -identity::<T>(r), -a, b)?.with_kind(RealizationKind::SkewHamiltonian)
    }

    /// `(E, A)` in the native form of the kind.
    pub fn native_corner(&self) -> (DMatrix<T>, DMatrix<T>) {
        match self.kind {
            Some(RealizationKind::TOdd | RealizationKind::SkewSymmetric | RealizationKind::SkewHamiltonian) => {
                (-&self.e, -&self.a)
            }
            _ => (self.e.clone(), self.a.clone()),
        }
    }

    /// Re-check the structural conditions of the recorded kind.
    pub fn validate_kind(&self) -> Result<()> {
        let Some(kind) = self.kind else { return Ok(()) };
        let (e, a) = self.native_corner();
        let bt = self.b.transpose();
        let r = self.r();
        let ptag = kind.polynomial_tag();
        check(poly_has(&self.p, ptag), &format!("P is not {ptag}"))?;
        match kind {
            RealizationKind::Symmetric => {
                check(self.c == bt, "C must equal B^T")?;
                check(is_sym(&e), "E must be symmetric")?;
                check(is_sym(&a), "A must be symmetric")?;
            }
            RealizationKind::TEven => {
                check(self.c == bt, "C must equal B^T")?;
                check(is_skew(&e), "E must be skew-symmetric")?;
                check(is_sym(&a), "A must be symmetric")?;
            }
            RealizationKind::Hamiltonian => {
                let j = j_matrix::<T>(r)?;
                check(e == identity(r), "E must be the identity")?;
                check(is_sym(&(&j * &a)), "JA must be symmetric")?;
                check(self.c == &bt * j.transpose(), "C must equal B^T J^T")?;
            }
            RealizationKind::TOdd => {
                check(self.c == -&bt, "C must equal -B^T")?;
                check(e == identity(r), "E must be the identity")?;
                check(is_skew(&a), "A must be skew-symmetric")?;
            }
            RealizationKind::SkewSymmetric => {
                check(self.c == -&bt, "C must equal -B^T")?;
                check(is_skew(&e), "E must be skew-symmetric")?;
                check(is_skew(&a), "A must be skew-symmetric")?;
            }
            RealizationKind::SkewHamiltonian => {
                let j = j_matrix::<T>(r)?;
                check(e == identity(r), "E must be the identity")?;
                check(is_skew(&(&j * &a)), "JA must be skew-symmetric")?;
                check(self.c == -(&bt * j.transpose()), "C must equal -B^T J^T")?;
            }
        }
        Ok(())
    }

    /// Hamiltonian to T-even (`E := J`, `A := AJ`) and skew-Hamiltonian to
    /// skew-symmetric (same substitution in native form).
    pub fn convert_j(&self) -> Result<Self> {
        let r = self.r();
        let j = j_matrix::<T>(r)?;
        match self.kind {
            Some(RealizationKind::Hamiltonian) => {
                Realization::t_even(self.p.clone(), self.b.clone(), j.clone(), &self.a * &j)
            }
            Some(RealizationKind::SkewHamiltonian) => {
                let (_, a) = self.native_corner();
                Realization::skew_symmetric(self.p.clone(), self.b.clone(), j.clone(), &a * &j)
            }
            _ => invalid("only Hamiltonian and skew-Hamiltonian realizations convert through J"),
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(T) -> U + Copy) -> Realization<U> {
        Realization {
            p: self.p.map(f),
            c: self.c.map(f),
            e: self.e.map(f),
            a: self.a.map(f),
            b: self.b.map(f),
            kind: self.kind,
        }
    }

    pub fn to_c64(&self) -> Realization<C64> {
        self.map(|x| x.to_c64())
    }

    /// `M^S_i`, the Fiedler matrices of the system matrix.
    pub fn fiedler_matrix_s(&self, i: i64) -> Result<DMatrix<T>> {
        let (m, r) = (self.m(), self.r());
        let mp = crate::polymat::fiedler_matrix_p(i, &self.p)?;
        if i == 0 {
            let col = crate::polymat::e_kron(m, m, &self.c);
            let row = crate::polymat::et_kron(m, m, &self.b);
            Ok(two_by_two(&mp, &(-col), &(-row), &(-&self.a)))
        } else if i == -(m as i64) {
            Ok(block_diag(&[&mp, &(-&self.e)]))
        } else {
            Ok(block_diag(&[&mp, &identity(r)]))
        }
    }

    /// Product `M^S_t`.
    pub fn fiedler_product_s(&self, t: &crate::tuples::IndexTuple) -> Result<DMatrix<T>> {
        let size = self.m() * self.n() + self.r();
        let mut acc = identity(size);
        for i in t.iter() {
            acc *= self.fiedler_matrix_s(i)?;
        }
        Ok(acc)
    }
}

/// `S(lambda) = [[P, C], [B, A - lambda E]]` as a polynomial matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct SystemMatrix<T: Ring> {
    pub poly: PolyMatrix<T>,
    pub n: usize,
    pub r: usize,
}

impl<T: Ring> SystemMatrix<T> {
    pub fn eval(&self, lambda: T) -> DMatrix<T> {
        self.poly.eval(lambda)
    }
}

pub fn system_matrix<T: Ring>(re: &Realization<T>) -> SystemMatrix<T> {
    let (m, n, r) = (re.m(), re.n(), re.r());
    let len = m.max(1) + 1;
    let mut coeffs = Vec::with_capacity(len);
    for k in 0..len {
        let top = re.p.a(k);
        let m = match k {
            0 => two_by_two(&top, &re.c, &re.b, &re.a),
            1 => two_by_two(&top, &zeros(n, r), &zeros(r, n), &(-&re.e)),
            _ => two_by_two(&top, &zeros(n, r), &zeros(r, n), &zeros(r, r)),
        };
        coeffs.push(m);
    }
    SystemMatrix { poly: PolyMatrix::from_coeffs(coeffs).expect("consistent shapes"), n, r }
}

/// Structure identity of the system matrix for the recorded kind, exact.
pub fn system_structure_holds<T: Ring>(re: &Realization<T>) -> Result<bool> {
    let Some(kind) = re.kind else { return invalid("realization carries no structure kind") };
    let s = system_matrix(re).poly;
    let tag = match kind {
        RealizationKind::Symmetric => StructureTag::Symmetric,
        RealizationKind::TEven | RealizationKind::Hamiltonian => StructureTag::TEven,
        RealizationKind::TOdd => StructureTag::TOdd,
        RealizationKind::SkewSymmetric | RealizationKind::SkewHamiltonian => StructureTag::SkewSymmetric,
    };
    let s = if kind.uses_j() { s.lmul(&big_j(re.n(), re.r())?) } else { s };
    Ok(structure_check(&s, tag, 0.0).is_ok())
}

/// `G(lambda)`.
pub fn eval_g(re: &Realization<C64>, lambda: C64) -> Result<CMat> {
    let p = re.p.eval(lambda);
    if re.r() == 0 {
        return Ok(p);
    }
    let k = &re.e * lambda - &re.a;
    let lu = k.clone().lu();
    let sol = lu.solve(&re.b).ok_or_else(|| Error::Pole {
        re: lambda.re,
        im: lambda.im,
        what: "lambda E - A is singular".into(),
    })?;
    Ok(p + &re.c * sol)
}

/// Transfer function of a pencil split as `[[L11, L12], [L21, L22]]` with an
/// `r x r` trailing corner: `L11 - L12 L22^{-1} L21`.
pub fn transfer_function_eval(pencil: &PolyMatrix<C64>, r: usize, lambda: C64) -> Result<CMat> {
    let full = pencil.eval(lambda);
    let k = full.nrows() - r;
    let l11 = full.view((0, 0), (k, k)).into_owned();
    if r == 0 {
        return Ok(l11);
    }
    let l12 = full.view((0, k), (k, r)).into_owned();
    let l21 = full.view((k, 0), (r, k)).into_owned();
    let l22 = full.view((k, k), (r, r)).into_owned();
    let sol = l22.lu().solve(&l21).ok_or_else(|| Error::Pole {
        re: lambda.re,
        im: lambda.im,
        what: "corner pencil is singular".into(),
    })?;
    Ok(l11 - l12 * sol)
}

/// Outcome of a minimality test.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Offending eigenvalue of `(A, E)` and the failed condition.
    pub witness: Option<(f64, f64, &'static str)>,
}

/// Numeric rank with singular values below `tol * sigma_max` counted as zero.
pub fn numeric_rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Both rank conditions at every eigenvalue of `(A, E)`.
pub fn is_minimal<T: Ring>(re: &Realization<T>, tol: f64) -> Result<MinimalityReport> {
    let re = re.to_c64();
    let r = re.r();
    if r == 0 {
        return Ok(MinimalityReport { minimal: true, witness: None });
    }
    let pencil = PolyMatrix::pencil(-&re.a, re.e.clone());
    let eig = verify::pencil_eigenvalues(&pencil, &verify::Tolerances::default())?;
    for ev in eig.finite {
        let mu = ev.value;
        let k = &re.a - &re.e * mu;
        let ctrl = CMat::from_fn(r, re.n() + r, |i, j| if j < re.n() { re.b[(i, j)] } else { k[(i, j - re.n())] });
        if numeric_rank(&ctrl, tol) < r {
            return Ok(MinimalityReport { minimal: false, witness: Some((mu.re, mu.im, "rank [B, A - lambda E] < r")) });
        }
        let obs = CMat::from_fn(re.n() + r, r, |i, j| if i < re.n() { re.c[(i, j)] } else { k[(i - re.n(), j)] });
        if numeric_rank(&obs, tol) < r {
            return Ok(MinimalityReport { minimal: false, witness: Some((mu.re, mu.im, "rank [C; A - lambda E] < r")) });
        }
    }
    Ok(MinimalityReport { minimal: true, witness: None })
}

pub fn require_nonsingular_e(re: &Realization<C64>) -> Result<()> {
    if re.r() == 0 {
        return Ok(());
    }
    let sv = re.e.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smax == 0.0 || smin <= 1e-14 * smax {
        return Err(Error::Numeric(format!("E is singular (condition estimate {:.3e})", smax / smin.max(f64::MIN_POSITIVE))));
    }
    Ok(())
}

pub fn cmat_of<T: Ring>(m: &DMatrix<T>) -> CMat {
    to_cmat(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(r: usize, c: usize, v: &[i128]) -> DMatrix<i128> {
        DMatrix::from_row_slice(r, c, v)
    }

    fn toy() -> Realization<i128> {
        let p = MatrixPolynomial::new(vec![im(1, 1, &[0]), im(1, 1, &[1])]).unwrap();
        Realization::new(p, im(1, 1, &[1]), im(1, 1, &[1]), im(1, 1, &[0]), im(1, 1, &[1])).unwrap()
    }

    #[test]
    fn toy_system_matrix() {
        let s = system_matrix(&toy());
        assert_eq!(s.eval(3), im(2, 2, &[3, 1, 1, -3]));
    }

    #[test]
    fn toy_is_minimal() {
        assert!(is_minimal(&toy(), 1e-10).unwrap().minimal);
        let mut re = toy();
        re.b = im(1, 1, &[0]);
        let rep = is_minimal(&re, 1e-10).unwrap();
        assert!(!rep.minimal);
        assert_eq!(rep.witness.unwrap().2, "rank [B, A - lambda E] < r");
    }

    #[test]
    fn symmetric_kind_checks() {
        let p = MatrixPolynomial::new(vec![im(1, 1, &[1]), im(1, 1, &[2])]).unwrap();
        let ok = Realization::symmetric(p.clone(), im(2, 1, &[1, 2]), im(2, 2, &[1, 0, 0, 1]), im(2, 2, &[0, 1, 1, 0]));
        assert!(ok.is_ok());
        assert!(system_structure_holds(&ok.unwrap()).unwrap());
        let bad = Realization::symmetric(p, im(2, 1, &[1, 2]), im(2, 2, &[1, 0, 0, 1]), im(2, 2, &[0, 1, 2, 0]));
        assert!(matches!(bad, Err(Error::Structural(_))));
    }

    #[test]
    fn hamiltonian_converts_to_t_even() {
        // JA symmetric with A = [[1, 2], [3, -1]]: JA = [[3, -1], [-1, -2]]
        let a = im(2, 2, &[1, 2, 3, -1]);
        let p = MatrixPolynomial::new(vec![im(1, 1, &[1]), im(1, 1, &[0]), im(1, 1, &[1])]).unwrap();
        let re = Realization::hamiltonian(p, im(2, 1, &[1, 1]), a).unwrap();
        assert!(system_structure_holds(&re).unwrap());
        let te = re.convert_j().unwrap();
        assert_eq!(te.kind, Some(RealizationKind::TEven));
        assert!(system_structure_holds(&te).unwrap());
        let l = C64::new(0.3, 0.7);
        let g1 = eval_g(&re.to_c64(), l).unwrap();
        let g2 = eval_g(&te.to_c64(), l).unwrap();
        assert!((g1 - g2).norm() < 1e-12);
    }

    #[test]
    fn t_odd_uses_negated_border() {
        let p = MatrixPolynomial::new(vec![im(1, 1, &[0]), im(1, 1, &[1])]).unwrap();
        let re = Realization::t_odd(p, im(2, 1, &[1, 0]), im(2, 2, &[0, 1, -1, 0])).unwrap();
        let s = system_matrix(&re);
        assert_eq!(s.poly.coeff(0)[(0, 1)], -1);
        assert!(system_structure_holds(&re).unwrap());
    }

    #[test]
    fn transfer_function_of_system_matrix_is_g() {
        let re = toy().to_c64();
        let s = system_matrix(&re);
        let l = C64::new(0.4, -1.1);
        let g = transfer_function_eval(&s.poly, 1, l).unwrap();
        assert!((g - eval_g(&re, l).unwrap()).norm() < 1e-12);
    }
}
