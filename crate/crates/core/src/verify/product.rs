use crate::error::Result;
use crate::polymat::elementary_product;
use crate::realize::Realization;
use crate::scalar::{max_abs, Ring};
use crate::tuples::IndexTuple;
use nalgebra::DMatrix;

fn close<T: Ring>(a: &DMatrix<T>, b: &DMatrix<T>, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = max_abs(a).max(max_abs(b)).max(1.0);
    max_abs(&(a - b)) <= tol * scale
}

/// `M_{t1}(x1) == M_{t2}(x2)`; `tol = 0` asks for exact equality.
pub fn product_equal<T: Ring>(
    t1: &IndexTuple,
    x1: &[DMatrix<T>],
    t2: &IndexTuple,
    x2: &[DMatrix<T>],
    m: usize,
    n: usize,
    tol: f64,
) -> Result<bool> {
    Ok(close(&elementary_product(t1, x1, m, n)?, &elementary_product(t2, x2, m, n)?, tol))
}

/// `𝕄^S_{t1} == 𝕄^S_{t2}` for the Fiedler matrices of a realization.
pub fn products_match<T: Ring>(t1: &IndexTuple, t2: &IndexTuple, re: &Realization<T>, tol: f64) -> Result<bool> {
    Ok(close(&re.fiedler_product_s(t1)?, &re.fiedler_product_s(t2)?, tol))
}
