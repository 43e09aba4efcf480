use super::det::det_poly;
use super::Tolerances;
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::realize::numeric_rank;
use crate::scalar::{CMat, C64};
use serde::Serialize;

/// Rank chain of the reversed pencil at zero.
#[derive(Debug, Clone, Serialize)]
pub struct InfinityReport {
    pub size: usize,
    pub leading_rank: usize,
    /// `chain[k-1]` is the nullity of the order-`k` Toeplitz matrix.
    pub chain: Vec<usize>,
    pub infinite_count: usize,
}

fn toeplitz(y: &CMat, x: &CMat, k: usize) -> CMat {
    let n = y.nrows();
    let mut t = CMat::zeros(k * n, k * n);
    for i in 0..k {
        t.view_mut((i * n, i * n), (n, n)).copy_from(y);
        if i + 1 < k {
            t.view_mut(((i + 1) * n, i * n), (n, n)).copy_from(x);
        }
    }
    t
}

/// Partial multiplicities at infinity of a regular pencil `X + λY`, read off
/// from the zero eigenvalue of `Y + μX`.
pub fn infinity_structure(pencil: &PolyMatrix<C64>, tol: &Tolerances) -> Result<InfinityReport> {
    let n = pencil.nrows();
    if pencil.coeffs().len() > 2 && pencil.degree().unwrap_or(0) > 1 {
        return Err(Error::InvalidInput("infinity structure needs a pencil".into()));
    }
    let x = pencil.coeff(0);
    let y = pencil.coeff(1);
    let leading_rank = numeric_rank(&y, tol.rank);
    let mut chain = Vec::new();
    let mut prev = 0usize;
    for k in 1..=n + 1 {
        let t = toeplitz(&y, &x, k);
        let nul = k * n - numeric_rank(&t, tol.rank);
        chain.push(nul);
        if nul == prev {
            break;
        }
        prev = nul;
    }
    Ok(InfinityReport { size: n, leading_rank, chain, infinite_count: prev })
}

#[derive(Debug, Clone, Serialize)]
pub struct InfinityComparison {
    pub count: usize,
    pub expected: usize,
    pub consistent: bool,
}

/// Compares the rank-chain count of `l` with `size(l) - deg det s`.
pub fn infinite_count_consistency(l: &PolyMatrix<C64>, s: &PolyMatrix<C64>, tol: &Tolerances) -> Result<InfinityComparison> {
    let rep = infinity_structure(l, tol)?;
    let Some(ds) = det_poly(s, tol)?.degree() else {
        return Err(Error::Numeric("system matrix is singular".into()));
    };
    let expected = l.nrows().checked_sub(ds).ok_or_else(|| Error::Consistency("deg det S exceeds the pencil size".into()))?;
    Ok(InfinityComparison { count: rep.infinite_count, expected, consistent: rep.infinite_count == expected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn full_rank_leading() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let r = infinity_structure(&PolyMatrix::pencil(-a, DMatrix::identity(2, 2)), &Tolerances::default()).unwrap();
        assert_eq!(r.infinite_count, 0);
        assert_eq!(r.leading_rank, 2);
    }

    #[test]
    fn one_infinite_eigenvalue() {
        let y = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(0.0)]));
        let r = infinity_structure(&PolyMatrix::pencil(-DMatrix::identity(2, 2), y), &Tolerances::default()).unwrap();
        assert_eq!(r.infinite_count, 1);
    }

    #[test]
    fn jordan_chain_at_infinity() {
        // Y nilpotent of order 2, X = I: one infinite eigenvalue of multiplicity 2.
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let r = infinity_structure(&PolyMatrix::pencil(DMatrix::identity(2, 2), y), &Tolerances::default()).unwrap();
        assert_eq!(r.chain, vec![1, 2, 2]);
        assert_eq!(r.infinite_count, 2);
    }
}
