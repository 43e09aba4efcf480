use super::{appendix_witnesses, det_proportionality, infinite_count_consistency, match_eigenvalues, pencil_eigenvalues, Tolerances};
use crate::error::{Error, Result};
use crate::pencils::BlockPencil;
use crate::polymat::{structure_check, StructureTag};
use crate::realize::{big_j, is_minimal, system_matrix, system_structure_holds, Realization};
use crate::scalar::C64;
use crate::tuples::IndexTuple;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Proxy,
    Full,
    Appendix,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub margin: Option<f64>,
    pub detail: String,
}

impl CheckResult {
    fn from(name: &'static str, r: Result<(bool, Option<f64>, String)>) -> Self {
        match r {
            Ok((passed, margin, detail)) => CheckResult { name, passed, margin, detail },
            Err(e) => CheckResult { name, passed: false, margin: None, detail: e.to_string() },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckResult>) -> Self {
        SuiteReport { suite, passed: checks.iter().all(|c| c.passed), checks }
    }

    /// `Err(CheckFailed)` naming the failed checks.
    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            return Ok(self);
        }
        let names: Vec<_> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err(Error::CheckFailed(names.join(", ")))
    }
}

/// Determinant proportionality, eigenvalue match and the infinite-count
/// proxy between a pencil and the system matrix of `re`.
pub fn proxy_checks(l: &BlockPencil<C64>, re: &Realization<C64>, tol: &Tolerances) -> Vec<CheckResult> {
    let lp = l.as_poly();
    let s = system_matrix(re).poly;
    let det = CheckResult::from(
        "det-proportionality",
        det_proportionality(&lp, &s, tol).map(|p| {
            (p.passes(tol.det_proportionality), Some(p.deviation), format!("c = {:.6}, degrees {} and {}", p.c, p.degree_l, p.degree_s))
        }),
    );
    let eig = CheckResult::from(
        "eigenvalues",
        (|| {
            let a = pencil_eigenvalues(&lp, tol)?.flat();
            let b = pencil_eigenvalues(&s, tol)?.flat();
            Ok(match match_eigenvalues(&a, &b) {
                Some(d) => (d <= tol.eig_match, Some(d), format!("{} finite eigenvalues", a.len())),
                None => (false, None, format!("{} vs {} finite eigenvalues", a.len(), b.len())),
            })
        })(),
    );
    let inf = CheckResult::from(
        "infinite-count",
        infinite_count_consistency(&lp, &s, tol)
            .map(|c| (c.consistent, None, format!("rank chain {} vs expected {}", c.count, c.expected))),
    );
    vec![det, eig, inf]
}

/// Exact (integer) or tolerance structure check, read through `diag(I, J)` when asked.
pub fn structure_checks(l: &BlockPencil<C64>, tag: StructureTag, through_j: bool, tol: f64) -> CheckResult {
    CheckResult::from(
        "structure",
        (|| {
            let p = if through_j { l.left_mul(&big_j(l.m * l.n, l.r)?) } else { l.clone() };
            Ok(match structure_check(&p.as_poly(), tag, tol) {
                Ok(()) => (true, Some(0.0), format!("{tag}")),
                Err(v) => (false, Some(v.residual), format!("coefficient {} entry ({}, {})", v.coeff, v.row, v.col)),
            })
        })(),
    )
}

pub fn run_proxy(l: &BlockPencil<C64>, re: &Realization<C64>, tol: &Tolerances) -> SuiteReport {
    SuiteReport::new(Suite::Proxy, proxy_checks(l, re, tol))
}

/// Proxy checks plus the structure predicate of the pencil, the structure
/// of the system matrix when the realization records a kind, and
/// optionally minimality of the realization.
pub fn run_full(
    l: &BlockPencil<C64>,
    re: &Realization<C64>,
    structure: Option<(StructureTag, bool)>,
    check_minimal: bool,
    tol: &Tolerances,
) -> SuiteReport {
    let mut checks = proxy_checks(l, re, tol);
    if let Some((tag, j)) = structure {
        checks.push(structure_checks(l, tag, j, tol.structure));
    }
    if re.kind.is_some() {
        checks.push(CheckResult::from(
            "system-structure",
            system_structure_holds(re).map(|ok| (ok, None, format!("{:?}", re.kind.expect("checked")))),
        ));
    }
    if check_minimal {
        checks.push(CheckResult::from(
            "minimality",
            is_minimal(re, tol.rank).map(|m| {
                let d = match m.witness {
                    Some((re, im, what)) => format!("fails at {re}+{im}i: {what}"),
                    None => "rank conditions hold at every eigenvalue of (A, E)".into(),
                };
                (m.minimal, None, d)
            }),
        ));
    }
    SuiteReport::new(Suite::Full, checks)
}

pub fn run_appendix(alpha: &IndexTuple, re: &Realization<C64>, seed: u64, tol: &Tolerances) -> SuiteReport {
    let c = CheckResult::from(
        "appendix",
        appendix_witnesses(alpha, &re.p, seed, tol).map(|r| {
            let d = format!("lambda-omega exact: {}, monomial elimination exact: {}", r.lambda_omega_exact, r.elimination_exact);
            (r.passed, Some(r.uv_residual), d)
        }),
    );
    SuiteReport::new(Suite::Appendix, vec![c])
}
