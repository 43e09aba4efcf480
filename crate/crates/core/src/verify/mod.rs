//! Numeric oracles used to check linearization claims.
//!
//! Every tolerance lives in [`Tolerances`]. Checks return their margins so
//! callers can report how close a pass was.

mod appendix;
mod det;
mod eig;
mod infinity;
mod null;
mod product;
mod suite;

pub use appendix::{appendix_witnesses, lambda_omega_elimination, uv_identity_residual, monomial_elimination, uv_matrices, AppendixReport, MonomialStrip};
pub use det::{det_poly, det_proportionality, DetPolynomial, Proportionality};
pub use eig::{match_eigenvalues, pencil_eigenvalues, polynomial_roots, Eigenvalue, Spectrum};
pub use infinity::{infinite_count_consistency, infinity_structure, InfinityComparison, InfinityReport};
pub use null::{
    is_minimal_basis, left_nullspace_at, minimal_basis_degree_sweep, normal_rank, nullspace_at, sample_points,
};
pub use product::{product_equal, products_match};
pub use suite::{proxy_checks, run_appendix, run_full, run_proxy, structure_checks, CheckResult, Suite, SuiteReport};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Singular values below `rank * sigma_max` count as zero.
    pub rank: f64,
    /// Held-out validation of interpolated determinants.
    pub holdout: f64,
    /// Coefficients below `det_degree * max |c|` are treated as zero.
    pub det_degree: f64,
    pub det_proportionality: f64,
    pub eig_cluster: f64,
    pub eig_match: f64,
    pub aberth_max_iter: usize,
    pub appendix: f64,
    pub structure: f64,
    pub max_det_size: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-10,
            holdout: 1e-8,
            det_degree: 1e-9,
            det_proportionality: 1e-8,
            eig_cluster: 1e-6,
            eig_match: 1e-6,
            aberth_max_iter: 200,
            appendix: 1e-10,
            structure: 1e-12,
            max_det_size: 200,
        }
    }
}
