use clap::{Args, Parser, Subcommand};
use ratlin::app::{self, BuildKind, BuildOutput};
use ratlin::json::{self, BundleJson, OptionsJson, PencilJson, ProblemFile, RealizationJson, RecipeJson, StructuredJson};
use ratlin::recover::Side;
use ratlin::verify::Suite;
use ratlin::{Error, Path, Result, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Fiedler-like pencils and structured Rosenbrock linearizations of rational matrices.
#[derive(Parser)]
#[command(name = "ratlin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Write the main document to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance overrides as a JSON object or a file holding one.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Seed for randomized witnesses and example instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Build GFPRs by both paths and require them to agree.
    #[arg(long, global = true)]
    paranoid: bool,
    /// Machine-readable output where a table is the default.
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build an fp, gfp, gfpr or structured:<kind> pencil.
    Build {
        #[arg(long)]
        kind: BuildKind,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        recipe: Option<PathBuf>,
        #[command(flatten)]
        structured: StructuredArgs,
    },
    /// Build a structure-preserving linearization.
    Structured {
        #[arg(long)]
        kind: String,
        /// Problem file; may be omitted when the spec file is a whole problem.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[command(flatten)]
        structured: StructuredArgs,
    },
    /// Check a pencil against the system matrix of a realization.
    Verify {
        #[arg(long)]
        pencil: PathBuf,
        /// Realization or problem file.
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value = "proxy")]
        suite: SuiteArg,
        /// Add the minimality check to the full suite.
        #[arg(long)]
        check_minimal: bool,
    },
    /// Recover a basis of S(λ) or G(λ) from one of the pencil.
    Recover {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        recipe: Option<PathBuf>,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Drop the state rows as well.
        #[arg(long)]
        to_g: bool,
    },
    /// Nullspace of a pencil at a point, or a minimal basis without one.
    Basis {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        /// Point as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Eigenvalues of a pencil, or of the system matrix of a problem.
    Eig {
        #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
        pencil: Option<PathBuf>,
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Cauchy–Maslov index of a real symmetric realization.
    CmIndex {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        bound: Option<f64>,
        /// Also compute it on the symmetric linearization.
        #[arg(long)]
        linearized: bool,
    },
    /// Run the worked-example corpus.
    Examples {
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct StructuredArgs {
    #[arg(long)]
    h: Option<usize>,
    /// Structured parameters, or a whole problem file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SuiteArg {
    Proxy,
    Full,
    Appendix,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PencilInput {
    Bare(PencilJson),
    Built(BuildOutput),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SystemInput {
    Problem(Box<ProblemFile>),
    Realization(RealizationJson),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecInput {
    Problem(Box<ProblemFile>),
    Spec(StructuredJson),
}

fn read<T: DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    json::parse(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn read_pencil(path: &PathBuf) -> Result<PencilJson> {
    Ok(match read(path)? {
        PencilInput::Bare(p) => p,
        PencilInput::Built(b) => b.pencil,
    })
}

impl Global {
    fn emit<T: Serialize>(&self, v: &T) -> Result<()> {
        let text = json::render(v, self.pretty)?;
        match &self.out {
            Some(p) => std::fs::write(p, text + "\n").map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
            None => {
                say(text);
                Ok(())
            }
        }
    }

    fn print<T: Serialize>(&self, v: &T) -> Result<()> {
        say(json::render(v, self.pretty)?);
        Ok(())
    }

    fn path(&self) -> Path {
        if self.paranoid || cfg!(debug_assertions) {
            Path::Both
        } else {
            Path::Bordered
        }
    }

    /// Folds `--tol` and `--seed` into the options.
    fn options(&self, mut o: OptionsJson) -> Result<OptionsJson> {
        if let Some(t) = &self.tol {
            let text = if t.trim_start().starts_with('{') {
                t.clone()
            } else {
                std::fs::read_to_string(t).map_err(|e| Error::Schema(format!("cannot read {t}: {e}")))?
            };
            let mut base = serde_json::to_value(o.tolerances).map_err(|e| Error::Schema(e.to_string()))?;
            let patch: serde_json::Map<String, serde_json::Value> = json::parse(&text)?;
            for (k, v) in patch {
                base[k] = v;
            }
            o.tolerances = serde_json::from_value(base).map_err(|e| Error::Schema(format!("--tol: {e}")))?;
        }
        if self.seed.is_some() {
            o.seed = self.seed;
        }
        Ok(o)
    }
}

fn load_problem(problem: Option<&PathBuf>, s: &StructuredArgs, g: &Global) -> Result<ProblemFile> {
    let spec = s.spec.as_ref().map(read::<SpecInput>).transpose()?;
    let mut p = match (problem, spec) {
        (Some(path), spec) => {
            let mut p: ProblemFile = read(path)?;
            match spec {
                Some(SpecInput::Spec(sj)) => p.structured = Some(sj),
                Some(SpecInput::Problem(q)) => p.structured = q.structured,
                None => {}
            }
            p
        }
        (None, Some(SpecInput::Problem(q))) => *q,
        (None, _) => return Err(Error::Schema("a problem file is required (--problem, or a whole problem in --spec)".into())),
    };
    if let Some(h) = s.h {
        p.structured.get_or_insert_with(Default::default).h = h;
    }
    p.options = g.options(p.options)?;
    Ok(p)
}

fn parse_point(s: &str) -> Result<C64> {
    let bad = || Error::InvalidInput(format!("cannot read {s:?} as a point; use re or re,im"));
    let parts: Vec<f64> = s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    match parts[..] {
        [re] => Ok(C64::new(re, 0.0)),
        [re, im] => Ok(C64::new(re, im)),
        _ => Err(bad()),
    }
}

fn build(g: &Global, kind: BuildKind, p: &ProblemFile) -> Result<()> {
    let out = app::build(p, kind, g.path())?;
    if g.out.is_some() {
        g.emit(&out.pencil)?;
        g.print(&out.report)
    } else {
        g.print(&out)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Build { kind, problem, recipe, structured } => {
            let mut p = load_problem(Some(problem), structured, g)?;
            if let Some(r) = recipe {
                p.recipe = Some(read::<RecipeJson>(r)?);
            }
            build(g, *kind, &p)?;
        }
        Command::Structured { kind, problem, structured } => {
            let p = load_problem(problem.as_ref(), structured, g)?;
            build(g, BuildKind::Structured(app::parse_kind(kind)?), &p)?;
        }
        Command::Verify { pencil, system, suite, check_minimal } => {
            let pencil = read_pencil(pencil)?;
            let (re, opts) = match read(system)? {
                SystemInput::Problem(p) => (p.realization, p.options),
                SystemInput::Realization(r) => (r, OptionsJson::default()),
            };
            let mut opts = g.options(opts)?;
            opts.check_minimal |= *check_minimal;
            let suite = match suite {
                SuiteArg::Proxy => Suite::Proxy,
                SuiteArg::Full => Suite::Full,
                SuiteArg::Appendix => Suite::Appendix,
            };
            let report = app::verify(&pencil, &re, suite, &opts)?;
            g.emit(&report)?;
            if !report.passed {
                return Ok(ExitCode::from(Error::CheckFailed(String::new()).exit_code() as u8));
            }
        }
        Command::Recover { pencil, basis, recipe, side, to_g } => {
            let pencil = read_pencil(pencil)?;
            let basis: BundleJson = read(basis)?;
            let recipe = recipe.as_ref().map(read::<RecipeJson>).transpose()?;
            g.emit(&app::recover(&pencil, &basis, recipe.as_ref(), side.map(Side::from), *to_g)?)?;
        }
        Command::Basis { pencil, side, at } => {
            let pencil = read_pencil(pencil)?;
            let at = at.as_deref().map(parse_point).transpose()?;
            let opts = g.options(OptionsJson::default())?;
            g.emit(&app::basis(&pencil, (*side).into(), at, &opts.tolerances)?)?;
        }
        Command::Eig { pencil, problem } => {
            let spectrum = match (pencil, problem) {
                (Some(p), _) => app::pencil_spectrum(&read_pencil(p)?, &g.options(OptionsJson::default())?.tolerances)?,
                (None, Some(p)) => {
                    let p: ProblemFile = read(p)?;
                    let opts = g.options(p.options)?;
                    app::system_spectrum(&p.realization, &opts.tolerances)?
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            g.emit(&spectrum)?;
        }
        Command::CmIndex { problem, delta, bound, linearized } => {
            let p: ProblemFile = read(problem)?;
            let mut grid = p.options.grid;
            if let Some(d) = delta {
                grid.delta = *d;
            }
            if let Some(b) = bound {
                grid.bound = *b;
            }
            g.emit(&app::cm_index(&p, &grid, *linearized)?)?;
        }
        Command::Examples { list } => {
            if *list {
                for id in ratlin::corpus::example_ids() {
                    say(format!("{id}\t{}", ratlin::corpus::example_title(id).unwrap_or("")));
                }
                return Ok(ExitCode::SUCCESS);
            }
            let outcomes = app::examples(g.seed.unwrap_or(0));
            if g.json {
                g.emit(&outcomes)?;
            } else {
                let w = outcomes.iter().map(|o| o.id.len()).max().unwrap_or(0);
                for o in &outcomes {
                    say(format!("{:<w$}  {}  {}", o.id, if o.passed { "pass" } else { "FAIL" }, o.detail));
                }
            }
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(ExitCode::from(Error::CheckFailed(String::new()).exit_code() as u8));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    code: i32,
    message: String,
}

/// A line on stdout; a closed pipe ends the process quietly.
fn say(line: impl std::fmt::Display) {
    if let Err(e) = writeln!(std::io::stdout().lock(), "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let report = ErrorReport { error: e.kind(), code: e.exit_code(), message: e.to_string() };
            eprintln!("{}", serde_json::to_string(&report).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
