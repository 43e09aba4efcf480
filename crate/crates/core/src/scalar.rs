//! Scalar rings used by the constructions.
//!
//! Pencil assembly only needs ring operations, so every builder is generic
//! over [`Ring`]. Exact checks run over `i128`; spectra and recovery run over
//! `Complex64`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::NumAssign;
use std::fmt::Debug;
use std::ops::Neg;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub trait Ring:
    nalgebra::Scalar + Copy + NumAssign + Neg<Output = Self> + Debug + Send + Sync + 'static
{
    /// Arithmetic is exact, so equality checks need no tolerance.
    const EXACT: bool;
    fn to_c64(self) -> C64;
    fn conj(self) -> Self;
    /// Magnitude used for tolerance checks; exact rings return 0 or 1-ish sizes.
    fn magnitude(self) -> f64;
    fn from_i64(v: i64) -> Self;
}

impl Ring for i128 {
    const EXACT: bool = true;
    fn to_c64(self) -> C64 {
        C64::new(self as f64, 0.0)
    }
    fn conj(self) -> Self {
        self
    }
    fn magnitude(self) -> f64 {
        (self as f64).abs()
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl Ring for f64 {
    const EXACT: bool = false;
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn conj(self) -> Self {
        self
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Ring for C64 {
    const EXACT: bool = false;
    fn to_c64(self) -> C64 {
        self
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
}

pub fn to_cmat<T: Ring>(m: &DMatrix<T>) -> CMat {
    m.map(|x| x.to_c64())
}

pub fn identity<T: Ring>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}

pub fn zeros<T: Ring>(r: usize, c: usize) -> DMatrix<T> {
    DMatrix::from_element(r, c, T::zero())
}

pub fn is_zero_mat<T: Ring>(m: &DMatrix<T>) -> bool {
    m.iter().all(|x| x.is_zero())
}

pub fn max_abs<T: Ring>(m: &DMatrix<T>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.magnitude()))
}

/// Exact determinant over the integers by fraction-free elimination.
pub fn det_i128(m: &DMatrix<i128>) -> i128 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[(k, k)] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[(i, k)] != 0) else {
                return 0;
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
            }
            a[(i, k)] = 0;
        }
        prev = a[(k, k)];
    }
    sign * a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactors() {
        let m = DMatrix::from_row_slice(3, 3, &[2i128, -1, 0, 1, 3, 2, 0, 4, -2]);
        // 2*(3*-2-2*4) - (-1)*(1*-2-0) = 2*(-14) + (-2) = -30
        assert_eq!(det_i128(&m), -30);
        let s = DMatrix::from_row_slice(2, 2, &[0i128, 1, 1, 0]);
        assert_eq!(det_i128(&s), -1);
    }
}
