//! Command implementations behind the `ratlin` binary. Each one takes parsed
//! JSON documents and returns a serializable value, so every CLI run can be
//! replayed as library calls.

use crate::corpus::{self, ExampleOutcome};
use crate::error::{Error, Result};
use crate::json::{BundleJson, Mode, OptionsJson, PencilJson, ProblemFile, RealizationJson, RecipeJson, StructuredJson};
use crate::pencils::{fiedler_pencil, gf_pencil, gfpr, BlockPattern, BlockPencil, GfprRecipe, Path};
use crate::polymat::StructureTag;
use crate::realize::{system_matrix, Realization, RealizationKind};
use crate::recover::{pgf_alpha, recover_from_gfpr, recover_from_pgf, recover_s_to_g, Side, VectorBundle};
use crate::scalar::{Ring, C64};
use crate::structured::{self, CauchyMaslov, CmGrid, StructuredLinearization, SymGfprSpec};
use crate::tuples::IndexTuple;
use crate::verify::{self, Spectrum, Suite, SuiteReport, Tolerances};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildKind {
    Fp,
    Gfp,
    Gfpr,
    Structured(RealizationKind),
}

impl FromStr for BuildKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fp" => Ok(BuildKind::Fp),
            "gfp" => Ok(BuildKind::Gfp),
            "gfpr" => Ok(BuildKind::Gfpr),
            _ => match s.strip_prefix("structured:") {
                Some(k) => parse_kind(k).map(BuildKind::Structured),
                None => Err(Error::InvalidInput(format!("unknown kind {s:?}; expected fp, gfp, gfpr or structured:<kind>"))),
            },
        }
    }
}

/// `symmetric`, `t-even`, `t-odd`, `hamiltonian`, `skew-hamiltonian` or `skew-symmetric`.
pub fn parse_kind(s: &str) -> Result<RealizationKind> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| Error::InvalidInput(format!("unknown structure kind {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildReport {
    pub family: String,
    pub path: Option<Path>,
    pub c_block: Option<usize>,
    pub b_block: Option<usize>,
    /// Built over the integers rather than in floating point.
    pub exact: bool,
    pub pattern: BlockPattern,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_ok: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi_identity: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildOutput {
    pub pencil: PencilJson,
    pub report: BuildReport,
}

type Inputs<T> = (Realization<T>, Option<GfprRecipe<T>>, SymGfprSpec<T>);

fn exact_inputs(rj: &RealizationJson, recipe: Option<&RecipeJson>, sj: &StructuredJson) -> Result<Option<Inputs<i128>>> {
    let n = rj.p.n;
    let Some(re) = rj.to_exact()? else { return Ok(None) };
    let recipe = match recipe {
        Some(r) => match r.to_exact(n)? {
            Some(r) => Some(r),
            None => return Ok(None),
        },
        None => None,
    };
    Ok(sj.sym_spec_exact(n)?.map(|spec| (re, recipe, spec)))
}

/// Builds the pencil named by `kind` for the problem's realization. Integer
/// problems are built exactly unless the options ask for floating point.
pub fn build(problem: &ProblemFile, kind: BuildKind, path: Path) -> Result<BuildOutput> {
    let mut rj = problem.realization.clone();
    if let BuildKind::Structured(k) = kind {
        match rj.structure {
            None => rj.structure = Some(k),
            Some(s) if s == k => {}
            Some(s) => return Err(Error::Precondition(format!("the realization is {s:?}, not {k:?}"))),
        }
    }
    let sj = problem.structured.clone().unwrap_or_default();
    let tol = &problem.options.tolerances;
    let exact = match problem.options.mode {
        Mode::Float => None,
        _ => exact_inputs(&rj, problem.recipe.as_ref(), &sj)?,
    };
    match exact {
        Some(inputs) => build_with(kind, path, inputs, problem.recipe.as_ref(), &sj, tol, true),
        None if problem.options.mode == Mode::Exact => {
            Err(Error::InvalidInput("exact mode needs integer entries in the realization and every assignment".into()))
        }
        None => {
            let n = rj.p.n;
            let recipe = problem.recipe.as_ref().map(|r| r.to_c64(n)).transpose()?;
            build_with(kind, path, (rj.to_c64()?, recipe, sj.sym_spec_c64(n)?), problem.recipe.as_ref(), &sj, tol, false)
        }
    }
}

fn output<T: Ring>(l: &BlockPencil<T>, recipe: RecipeJson, exact: bool) -> BuildOutput {
    let pv = &l.provenance;
    let report = BuildReport {
        family: pv.family.clone(),
        path: pv.path,
        c_block: pv.c_block,
        b_block: pv.b_block,
        exact,
        pattern: l.block_pattern(),
        structure: None,
        structure_ok: None,
        quasi_identity: None,
    };
    BuildOutput { pencil: PencilJson { recipe: Some(recipe), ..PencilJson::of(l) }, report }
}

fn build_with<T: Ring>(
    kind: BuildKind,
    path: Path,
    (re, recipe, spec): Inputs<T>,
    rj_recipe: Option<&RecipeJson>,
    sj: &StructuredJson,
    tol: &Tolerances,
    exact: bool,
) -> Result<BuildOutput> {
    let need = || rj_recipe.ok_or_else(|| Error::Schema("this kind needs a recipe".into()));
    let m = re.m() as i64;
    match kind {
        BuildKind::Fp => {
            let sigma = &need()?.sigma;
            let l = fiedler_pencil(sigma, &re, path)?;
            let rec = GfprRecipe::<T>::new(sigma.clone(), IndexTuple::new(vec![-m]));
            Ok(output(&l, RecipeJson::of(&rec), exact))
        }
        BuildKind::Gfp => {
            let r = need()?;
            let (Some(w0), Some(w1)) = (&r.omega0, &r.omega1) else {
                return Err(Error::Schema("a gfp recipe needs omega0 and omega1".into()));
            };
            let l = gf_pencil(w0, w1, &re)?;
            let rec = RecipeJson { omega0: Some(w0.clone()), omega1: Some(w1.clone()), ..RecipeJson::default() };
            Ok(output(&l, rec, exact))
        }
        BuildKind::Gfpr => {
            let rec = recipe.ok_or_else(|| Error::Schema("this kind needs a recipe".into()))?;
            let l = gfpr(&rec, &re, path)?;
            Ok(output(&l, RecipeJson::of(&rec), exact))
        }
        BuildKind::Structured(k) => {
            let sl = structured_for(k, &spec, sj, &re)?;
            let ok = sl.check(tol.structure).is_ok();
            let mut out = output(&sl.pencil, RecipeJson::of(&sl.recipe), exact);
            out.pencil.quasi_identity = Some(sl.q.signs.clone());
            out.pencil.structure = Some(sl.tag);
            out.pencil.through_j = sl.through_j;
            out.report.structure = Some(sl.tag);
            out.report.structure_ok = Some(ok);
            out.report.quasi_identity = Some(sl.q.signs);
            Ok(out)
        }
    }
}

/// Dispatch to the structured constructor of `kind`.
pub fn structured_for<T: Ring>(
    kind: RealizationKind,
    spec: &SymGfprSpec<T>,
    sj: &StructuredJson,
    re: &Realization<T>,
) -> Result<StructuredLinearization<T>> {
    let (h, z) = (sj.h, sj.z_index);
    match kind {
        RealizationKind::Symmetric => structured::symmetric_linearization(spec, re),
        RealizationKind::TEven => structured::t_even_linearization(h, z, re),
        RealizationKind::Hamiltonian => structured::hamiltonian_linearization(h, z, re),
        RealizationKind::TOdd => structured::t_odd_linearization(h, z, re),
        RealizationKind::SkewSymmetric => structured::skew_symmetric_linearization(h, z, &sj.t_w, &sj.t_z, re),
        RealizationKind::SkewHamiltonian => structured::skew_hamiltonian_linearization(h, z, &sj.t_w, &sj.t_z, re),
    }
}

fn pencil_alpha(p: &PencilJson) -> Result<IndexTuple> {
    let r = p.recipe.as_ref().ok_or_else(|| Error::Precondition("the pencil records no recipe".into()))?;
    match (&r.omega0, &r.omega1) {
        (Some(w0), Some(w1)) => pgf_alpha(w0, w1, p.m),
        _ => r.to_c64(p.n)?.alpha(p.m),
    }
}

/// Runs a verification suite of `pencil` against the system matrix of `system`.
pub fn verify(pencil: &PencilJson, system: &RealizationJson, suite: Suite, opts: &OptionsJson) -> Result<SuiteReport> {
    let l = pencil.to_c64()?;
    let re = system.to_c64()?;
    if (l.m, l.n, l.r) != (re.m(), re.n(), re.r()) {
        return Err(Error::InvalidInput(format!(
            "pencil has (m, n, r) = ({}, {}, {}), system has ({}, {}, {})",
            l.m,
            l.n,
            l.r,
            re.m(),
            re.n(),
            re.r()
        )));
    }
    let tol = &opts.tolerances;
    Ok(match suite {
        Suite::Proxy => verify::run_proxy(&l, &re, tol),
        Suite::Full => verify::run_full(&l, &re, pencil.structure.map(|t| (t, pencil.through_j)), opts.check_minimal, tol),
        Suite::Appendix => verify::run_appendix(&pencil_alpha(pencil)?, &re, opts.seed.unwrap_or(0), tol),
    })
}

/// Recovers a bundle of `S(λ)` (or of `G(λ)` with `to_g`) from one of the
/// pencil. The recipe defaults to the one recorded in the pencil.
pub fn recover(pencil: &PencilJson, basis: &BundleJson, recipe: Option<&RecipeJson>, side: Option<Side>, to_g: bool) -> Result<BundleJson> {
    let mut z = basis.to_bundle()?;
    if let Some(s) = side {
        z.side = s;
    }
    let r = recipe
        .or(pencil.recipe.as_ref())
        .ok_or_else(|| Error::Precondition("no recipe given and none recorded in the pencil".into()))?;
    let (m, n, rr) = (pencil.m, pencil.n, pencil.r);
    let out = match (&r.omega0, &r.omega1) {
        (Some(w0), Some(w1)) => recover_from_pgf(&z, w0, w1, m, n, rr)?,
        _ => recover_from_gfpr(&z, &r.to_c64(n)?, m, n, rr)?,
    };
    let out = if to_g { recover_s_to_g(&out, n)? } else { out };
    Ok(BundleJson::of(&out))
}

/// Nullspace of the pencil at `at`, or a minimal basis of its rational
/// nullspace when no point is given.
pub fn basis(pencil: &PencilJson, side: Side, at: Option<C64>, tol: &Tolerances) -> Result<BundleJson> {
    let l = pencil.to_c64()?;
    let b = match at {
        Some(z) => {
            let v = l.eval(z);
            let ns = match side {
                Side::Right => verify::nullspace_at(&v, tol.rank),
                Side::Left => verify::left_nullspace_at(&v, tol.rank),
            };
            VectorBundle::from_matrix(&ns, side)
        }
        None => verify::minimal_basis_degree_sweep(&l.as_poly(), side, tol)?,
    };
    Ok(BundleJson::of(&b))
}

pub fn pencil_spectrum(pencil: &PencilJson, tol: &Tolerances) -> Result<Spectrum> {
    verify::pencil_eigenvalues(&pencil.to_c64()?.as_poly(), tol)
}

/// Spectrum of the system matrix of a realization.
pub fn system_spectrum(re: &RealizationJson, tol: &Tolerances) -> Result<Spectrum> {
    verify::pencil_eigenvalues(&system_matrix(&re.to_c64()?).poly, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct CmReport {
    pub g: CauchyMaslov,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linearization: Option<CauchyMaslov>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preserved: Option<bool>,
}

/// Cauchy–Maslov index of `G`, and with `linearized` also of the transfer
/// function of its symmetric linearization.
pub fn cm_index(problem: &ProblemFile, grid: &CmGrid, linearized: bool) -> Result<CmReport> {
    let mut re = problem.realization.to_real()?;
    let g = structured::cauchy_maslov_index(&re, grid)?;
    if !linearized {
        return Ok(CmReport { g, linearization: None, preserved: None });
    }
    if re.kind.is_none() {
        re = re.with_kind(RealizationKind::Symmetric)?;
    }
    let sj = problem.structured.clone().unwrap_or_default();
    let spec = sj.sym_spec_c64(re.n())?;
    let spec = SymGfprSpec { h: spec.h, t_wh: spec.t_wh, t_vh: spec.t_vh, x: spec.x.map(|z| z.re), y: spec.y.map(|z| z.re) };
    let sl = structured::symmetric_linearization(&spec, &re)?;
    let lin = structured::linearization_cauchy_maslov(&sl, grid)?;
    let preserved = lin.index == g.index;
    Ok(CmReport { g, linearization: Some(lin), preserved: Some(preserved) })
}

pub fn examples(seed: u64) -> Vec<ExampleOutcome> {
    corpus::run_all(seed)
}
