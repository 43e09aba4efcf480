//! Seeded random instances with small integer entries.

use crate::error::{Error, Result};
use crate::pencils::nonsingular;
use crate::polymat::{MatrixPolynomial, StructureTag};
use crate::realize::{j_matrix, Realization, RealizationKind};
use crate::scalar::det_i128;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Entries are drawn from `-BOUND..=BOUND`.
pub const BOUND: i64 = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<i128> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-BOUND..=BOUND) as i128)
}

pub fn sym_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<i128> {
    let a = int_matrix(rng, n, n);
    DMatrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] })
}

pub fn skew_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<i128> {
    let a = int_matrix(rng, n, n);
    DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => a[(i, j)],
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => -a[(j, i)],
    })
}

/// Coefficient `j` of a matrix polynomial with the given structure.
fn coefficient(rng: &mut impl Rng, n: usize, j: usize, tag: Option<StructureTag>) -> Result<DMatrix<i128>> {
    let even = j.is_multiple_of(2);
    Ok(match tag {
        None => int_matrix(rng, n, n),
        Some(StructureTag::Symmetric) => sym_matrix(rng, n),
        Some(StructureTag::SkewSymmetric) => skew_matrix(rng, n),
        Some(StructureTag::TEven) if even => sym_matrix(rng, n),
        Some(StructureTag::TEven) => skew_matrix(rng, n),
        Some(StructureTag::TOdd) if even => skew_matrix(rng, n),
        Some(StructureTag::TOdd) => sym_matrix(rng, n),
        Some(t) => return Err(Error::InvalidInput(format!("no integer generator for {t} polynomials"))),
    })
}

/// Integer matrix with nonzero determinant, symmetric when asked.
pub fn nonsingular_matrix(rng: &mut impl Rng, n: usize, sym: bool) -> DMatrix<i128> {
    loop {
        let x = if sym { sym_matrix(rng, n) } else { int_matrix(rng, n, n) };
        if det_i128(&x) != 0 {
            return x;
        }
    }
}

/// Random `P`; the leading coefficient is redrawn until nonzero (and
/// nonsingular when `nonsingular_leading`, where the structure allows it).
pub fn polynomial(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    tag: Option<StructureTag>,
    nonsingular_leading: bool,
) -> Result<MatrixPolynomial<i128>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("degree and size must be positive".into()));
    }
    let mut coeffs = (0..m).map(|j| coefficient(rng, n, j, tag)).collect::<Result<Vec<_>>>()?;
    for _ in 0..1000 {
        let lead = coefficient(rng, n, m, tag)?;
        let ok = if nonsingular_leading { det_i128(&lead) != 0 } else { lead.iter().any(|&v| v != 0) };
        if ok {
            coeffs.push(lead);
            return MatrixPolynomial::new(coeffs);
        }
    }
    Err(Error::InvalidInput(format!("no admissible leading coefficient for n = {n} under {tag:?}")))
}

fn redraw<R: Rng>(rng: &mut R, f: impl Fn(&mut R) -> DMatrix<i128>, what: &str) -> Result<DMatrix<i128>> {
    for _ in 0..1000 {
        let m = f(rng);
        if nonsingular(&m) {
            return Ok(m);
        }
    }
    Err(Error::InvalidInput(format!("could not draw a nonsingular {what}")))
}

/// Random realization of the given kind with `E` nonsingular.
pub fn realization<R: Rng>(
    rng: &mut R,
    kind: Option<RealizationKind>,
    m: usize,
    n: usize,
    r: usize,
    nonsingular_leading: bool,
) -> Result<Realization<i128>> {
    let tag = kind.map(RealizationKind::polynomial_tag);
    let p = polynomial(rng, m, n, tag, nonsingular_leading)?;
    let b = int_matrix(rng, r, n);
    let needs_even = matches!(
        kind,
        Some(
            RealizationKind::TEven
                | RealizationKind::SkewSymmetric
                | RealizationKind::Hamiltonian
                | RealizationKind::SkewHamiltonian
        )
    );
    if needs_even && r % 2 == 1 {
        return Err(Error::InvalidInput(format!("{kind:?} realizations need an even state dimension, got {r}")));
    }
    match kind {
        None => {
            let c = int_matrix(rng, n, r);
            let e = redraw(rng, |g| int_matrix(g, r, r), "E")?;
            let a = int_matrix(rng, r, r);
            Realization::new(p, c, e, a, b)
        }
        Some(RealizationKind::Symmetric) => {
            let e = redraw(rng, |g| sym_matrix(g, r), "symmetric E")?;
            let a = sym_matrix(rng, r);
            Realization::symmetric(p, b, e, a)
        }
        Some(RealizationKind::TEven) => {
            let e = redraw(rng, |g| skew_matrix(g, r), "skew E")?;
            let a = sym_matrix(rng, r);
            Realization::t_even(p, b, e, a)
        }
        Some(RealizationKind::TOdd) => {
            let a = skew_matrix(rng, r);
            Realization::t_odd(p, b, a)
        }
        Some(RealizationKind::SkewSymmetric) => {
            let e = redraw(rng, |g| skew_matrix(g, r), "skew E")?;
            let a = skew_matrix(rng, r);
            Realization::skew_symmetric(p, b, e, a)
        }
        Some(RealizationKind::Hamiltonian) => {
            // JA = S symmetric, J^{-1} = -J.
            let s = sym_matrix(rng, r);
            let a = -(j_matrix::<i128>(r)? * s);
            Realization::hamiltonian(p, b, a)
        }
        Some(RealizationKind::SkewHamiltonian) => {
            let k = skew_matrix(rng, r);
            let a = -(j_matrix::<i128>(r)? * k);
            Realization::skew_hamiltonian(p, b, a)
        }
    }
}

/// Zero the last row and column of `A_m`, keeping every structure and making
/// the leading coefficient singular.
pub fn make_leading_singular(re: &Realization<i128>) -> Result<Realization<i128>> {
    let m = re.m();
    let n = re.n();
    let mut coeffs = re.p.coeffs().to_vec();
    for k in 0..n {
        coeffs[m][(n - 1, k)] = 0;
        coeffs[m][(k, n - 1)] = 0;
    }
    if coeffs[m].iter().all(|&v| v == 0) {
        return Err(Error::InvalidInput("leading coefficient vanishes after zeroing; use n > 1".into()));
    }
    let p = MatrixPolynomial::new(coeffs)?;
    let mut out = Realization::new(p, re.c.clone(), re.e.clone(), re.a.clone(), re.b.clone())?;
    out.kind = re.kind;
    out.validate_kind()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_validates() {
        let mut g = rng(7);
        for kind in RealizationKind::ALL {
            let re = realization(&mut g, Some(kind), 3, 4, 2, true).unwrap();
            assert_eq!(re.kind, Some(kind));
            assert!(nonsingular(&re.e));
            let s = make_leading_singular(&re).unwrap();
            assert!(!nonsingular(&s.p.a(3)));
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = realization(&mut rng(3), None, 2, 2, 1, false).unwrap();
        let b = realization(&mut rng(3), None, 2, 2, 1, false).unwrap();
        assert_eq!(a.p, b.p);
        assert_eq!(a.a, b.a);
    }
}
