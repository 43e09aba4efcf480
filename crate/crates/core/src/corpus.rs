//! Regression corpus of worked examples.
//!
//! Displayed pencils are written in a small block-pattern language: rows are
//! separated by `;`, blocks by `,`, and each block is a signed sum of terms
//! such as `lA4`, `-X`, `lI` or `Bt` (`l` marks a factor λ). Symbols are
//! instantiated with seeded integer matrices and compared exactly.

use crate::error::{Error, Result};
use crate::pencils::{gfpr, Assignment, BlockPencil, GfprRecipe, Path};
use crate::polymat::MatrixPolynomial;
use crate::random::{self, int_matrix, nonsingular_matrix};
use crate::realize::{Realization, RealizationKind};
use crate::recover::{index_shift, Side};
use crate::scalar::{identity, zeros};
use crate::structured::{
    self, cauchy_maslov_index, find_quasi_identity, CmGrid, QuasiIdentity, StructuredLinearization, SymGfprSpec,
};
use crate::tuples::{consecutions, rciss, IndexTuple};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    I,
    X,
    Y,
    /// Coefficient `A_j` of `P`.
    Coef(usize),
    B,
    Bt,
    C,
    E,
    /// State matrix `A`.
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub sign: i128,
    pub lambda: bool,
    pub sym: Sym,
}

/// Block pattern of a bordered pencil with `m` block rows of size `n` and a
/// final block row of size `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub rows: Vec<Vec<Vec<Term>>>,
}

fn parse_term(s: &str, sign: i128) -> Result<Option<Term>> {
    let (lambda, body) = match s.strip_prefix('l') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let sym = match body {
        "0" if !lambda => return Ok(None),
        "I" => Sym::I,
        "X" => Sym::X,
        "Y" => Sym::Y,
        "B" => Sym::B,
        "Bt" => Sym::Bt,
        "C" => Sym::C,
        "E" => Sym::E,
        "A" => Sym::A,
        _ => match body.strip_prefix('A').and_then(|d| d.parse().ok()) {
            Some(j) => Sym::Coef(j),
            None => return Err(Error::Schema(format!("unknown block term `{s}`"))),
        },
    };
    Ok(Some(Term { sign, lambda, sym }))
}

fn parse_block(s: &str) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let flush = |cur: &mut String, sign: i128, out: &mut Vec<Term>| -> Result<()> {
        if !cur.is_empty() {
            out.extend(parse_term(cur, sign)?);
            cur.clear();
        }
        Ok(())
    };
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '+' | '-' => {
                flush(&mut cur, sign, &mut out)?;
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if cur.is_empty() {
        return Err(Error::Schema(format!("empty block in `{s}`")));
    }
    flush(&mut cur, sign, &mut out)?;
    Ok(out)
}

pub fn parse_pattern(s: &str) -> Result<Pattern> {
    let rows: Vec<Vec<Vec<Term>>> = s
        .split(';')
        .map(|row| row.split(',').map(parse_block).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let k = rows.len();
    if k < 2 || rows.iter().any(|r| r.len() != k) {
        return Err(Error::Schema("pattern must be a square grid of at least 2x2 blocks".into()));
    }
    Ok(Pattern { rows })
}

/// Integer instantiation of every symbol a pattern may mention.
#[derive(Debug, Clone)]
pub struct Symbols {
    pub p: MatrixPolynomial<i128>,
    pub x: DMatrix<i128>,
    pub y: DMatrix<i128>,
    pub b: DMatrix<i128>,
    pub c: DMatrix<i128>,
    /// Native `E` and `A` of the realization kind.
    pub e: DMatrix<i128>,
    pub a: DMatrix<i128>,
}

impl Symbols {
    pub fn of(re: &Realization<i128>, x: DMatrix<i128>, y: DMatrix<i128>) -> Self {
        let (e, a) = re.native_corner();
        Symbols { p: re.p.clone(), x, y, b: re.b.clone(), c: re.c.clone(), e, a }
    }

    fn value(&self, sym: Sym, rows: usize, cols: usize) -> Result<DMatrix<i128>> {
        let v = match sym {
            Sym::I if rows == cols => identity(rows),
            Sym::I => return Err(Error::Schema(format!("identity in a {rows}x{cols} block"))),
            Sym::X => self.x.clone(),
            Sym::Y => self.y.clone(),
            Sym::Coef(j) if j <= self.p.m() => self.p.a(j),
            Sym::Coef(j) => return Err(Error::Schema(format!("A{j} exceeds the degree {}", self.p.m()))),
            Sym::B => self.b.clone(),
            Sym::Bt => self.b.transpose(),
            Sym::C => self.c.clone(),
            Sym::E => self.e.clone(),
            Sym::A => self.a.clone(),
        };
        if v.shape() != (rows, cols) {
            return Err(Error::Schema(format!("{sym:?} is {:?} in a {rows}x{cols} block", v.shape())));
        }
        Ok(v)
    }
}

impl Pattern {
    pub fn m(&self) -> usize {
        self.rows.len() - 1
    }

    /// `(X, Y)` of the displayed pencil `X + λY`.
    pub fn instantiate(&self, s: &Symbols) -> Result<(DMatrix<i128>, DMatrix<i128>)> {
        let m = self.m();
        let (n, r) = (s.p.n(), s.b.nrows());
        let dim = |k: usize| if k < m { n } else { r };
        let off = |k: usize| k.min(m) * n + k.saturating_sub(m) * r;
        let size = m * n + r;
        let (mut x, mut y) = (zeros::<i128>(size, size), zeros::<i128>(size, size));
        for (i, row) in self.rows.iter().enumerate() {
            for (j, terms) in row.iter().enumerate() {
                for t in terms {
                    let v = s.value(t.sym, dim(i), dim(j))? * t.sign;
                    let target = if t.lambda { &mut y } else { &mut x };
                    let mut view = target.view_mut((off(i), off(j)), (dim(i), dim(j)));
                    view += v;
                }
            }
        }
        Ok((x, y))
    }
}

/// First block `(i, j)` (1-based) where the pencil and the pattern differ.
pub fn compare(l: &BlockPencil<i128>, pattern: &Pattern, s: &Symbols) -> Result<Option<(usize, usize)>> {
    if pattern.m() != l.m {
        return Err(Error::Schema(format!("pattern has {} block rows, pencil has {}", pattern.m(), l.m)));
    }
    let (x, y) = pattern.instantiate(s)?;
    if x.shape() != l.x.shape() {
        return Err(Error::Schema("pattern and pencil sizes differ".into()));
    }
    let (m, n, r) = (l.m, l.n, l.r);
    let dim = |k: usize| if k < m { n } else { r };
    let off = |k: usize| k.min(m) * n + k.saturating_sub(m) * r;
    for i in 0..=m {
        for j in 0..=m {
            let (a, b) = ((off(i), off(j)), (dim(i), dim(j)));
            if x.view(a, b) != l.x.view(a, b) || y.view(a, b) != l.y.view(a, b) {
                return Ok(Some((i + 1, j + 1)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(u64) -> Result<String>;

struct Case {
    id: &'static str,
    title: &'static str,
    check: Check,
}

const CASES: &[Case] = &[
    Case { id: "gfpr-m4-decorated", title: "GFPR with an arbitrary assignment on (2,1), m = 4", check: gfpr_m4 },
    Case { id: "sym-m5-h2", title: "block penta-diagonal symmetric GFPR, m = 5", check: sym_m5 },
    Case { id: "sym-m6-h0", title: "symmetric GFPR, m = 6, h = 0", check: sym_m6 },
    Case { id: "t-even-m5", title: "T-even penta-diagonal pencil, m = 5", check: t_even_m5 },
    Case { id: "t-even-m4", title: "T-even pencil, m = 4", check: t_even_m4 },
    Case { id: "t-odd-m5", title: "T-odd penta-diagonal pencil, m = 5", check: t_odd_m5 },
    Case { id: "t-odd-m4", title: "T-odd pencil, m = 4", check: t_odd_m4 },
    Case { id: "skew-m5", title: "skew-symmetric penta-diagonal pencil, m = 5", check: skew_m5 },
    Case { id: "skew-m4", title: "skew-symmetric pencil, m = 4", check: skew_m4 },
    Case { id: "rciss-m11", title: "RCISS of two permutations of {0:10}", check: rciss_m11 },
    Case { id: "c0-subtuple", title: "c0 of (1,0,2,1,3,2,4,1,3,2,1)", check: c0_example },
    Case { id: "index-shift-m4", title: "minimal-index shifts for alpha = (1,2,3,0)", check: shift_m4 },
    Case { id: "sym-shift", title: "symmetric family shift (m-1)/2 for m = 3, 5, 7", check: sym_shift },
    Case { id: "odd-h", title: "odd h admits no block-symmetric GFPR", check: odd_h },
    Case { id: "cauchy-maslov", title: "Cauchy-Maslov index of the scalar battery", check: cm_battery },
];

pub fn example_ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.id).collect()
}

pub fn example_title(id: &str) -> Option<&'static str> {
    CASES.iter().find(|c| c.id == id).map(|c| c.title)
}

fn outcome(c: &Case, seed: u64) -> ExampleOutcome {
    let (passed, detail) = match (c.check)(seed) {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    ExampleOutcome { id: c.id, title: c.title, passed, detail }
}

pub fn run_example(id: &str, seed: u64) -> Result<ExampleOutcome> {
    let c = CASES.iter().find(|c| c.id == id).ok_or_else(|| Error::InvalidInput(format!("unknown example `{id}`")))?;
    Ok(outcome(c, seed))
}

pub fn run_all(seed: u64) -> Vec<ExampleOutcome> {
    CASES.iter().map(|c| outcome(c, seed)).collect()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::CheckFailed(msg.into())
}

fn expect_pattern(l: &BlockPencil<i128>, text: &str, s: &Symbols) -> Result<()> {
    match compare(l, &parse_pattern(text)?, s)? {
        None => Ok(()),
        Some((i, j)) => Err(fail(format!("block ({i}, {j}) differs from the display"))),
    }
}

/// Displays normalize `ε₁ = +1` and scale only the leading `mn` block, while
/// the constructor applies `𝐬Q` with `+1` at the border row. The two differ
/// by a global sign on the leading block; this undoes it.
fn as_displayed(s: &StructuredLinearization<i128>, shown: &[i8]) -> Result<BlockPencil<i128>> {
    let l = &s.pencil;
    let shown = QuasiIdentity { signs: shown.to_vec() };
    let t = if shown == s.q {
        1
    } else if shown.scaled(-1) == s.q {
        -1
    } else {
        return Err(fail(format!("quasi-identity {:?} differs from the display {:?}", s.q.signs, shown.signs)));
    };
    let mut out = l.clone();
    let k = l.m * l.n;
    for i in 0..k {
        for j in 0..k {
            out.x[(i, j)] *= t;
            out.y[(i, j)] *= t;
        }
    }
    Ok(out)
}

fn structured_case(
    seed: u64,
    kind: RealizationKind,
    m: usize,
    n: usize,
    build: impl Fn(&Realization<i128>) -> Result<StructuredLinearization<i128>>,
    shown: &[i8],
    text: &str,
) -> Result<String> {
    let mut g = random::rng(seed);
    let re = random::realization(&mut g, Some(kind), m, n, 2, true)?;
    let s = build(&re)?;
    s.check(0.0)?;
    let found = find_quasi_identity(&gfpr(&s.recipe, &re, Path::Both)?, s.tag, 0.0)?;
    expect_pattern(&as_displayed(&s, shown)?, text, &Symbols::of(&re, zeros(n, n), zeros(n, n)))?;
    Ok(format!("Q = {:?}, border at block {}", found.signs, m - s.alpha))
}

fn gfpr_m4(seed: u64) -> Result<String> {
    let mut g = random::rng(seed);
    let re = random::realization(&mut g, None, 4, 2, 2, false)?;
    let (x, y) = (int_matrix(&mut g, 2, 2), int_matrix(&mut g, 2, 2));
    let mut r = GfprRecipe::new(IndexTuple::new(vec![1, 2, 3, 0]), IndexTuple::new(vec![-4]));
    r.sigma2 = IndexTuple::new(vec![2, 1]);
    r.x2 = Assignment::Explicit(vec![x.clone(), y.clone()]);
    let l = gfpr(&r, &re, Path::Both)?;
    expect_pattern(
        &l,
        "lA4 + A3, -X, -Y, -I, 0;
         A2, lX - I, lY, lI, 0;
         A1, lI, A0, 0, C;
         -I, 0, lI, 0, 0;
         0, 0, B, 0, A - lE",
        &Symbols::of(&re, x, y),
    )?;
    Ok(format!("C column at block {}, B row at block {}", r.c_block(4), r.b_block(4)))
}

fn sym_m5(seed: u64) -> Result<String> {
    let mut g = random::rng(seed);
    let re = random::realization(&mut g, Some(RealizationKind::Symmetric), 5, 2, 2, false)?;
    let (x, y) = (nonsingular_matrix(&mut g, 2, true), nonsingular_matrix(&mut g, 2, true));
    let mut spec = SymGfprSpec::new(2, IndexTuple::new(vec![0]), IndexTuple::new(vec![-5]));
    spec.x = Assignment::Explicit(vec![x.clone()]);
    spec.y = Assignment::Explicit(vec![y.clone()]);
    let s = structured::symmetric_linearization(&spec, &re)?;
    s.check(0.0)?;
    expect_pattern(
        &s.pencil,
        "0, -Y, lY, 0, 0, 0;
         -Y, lA5 - A4, lA4, 0, 0, 0;
         lY, lA4, lA3 + A2, A1, -X, 0;
         0, 0, A1, -lA1 + A0, lX, Bt;
         0, 0, -X, lX, 0, 0;
         0, 0, 0, B, 0, A - lE",
        &Symbols::of(&re, x, y),
    )?;
    Ok(format!("border at block {}", 5 - s.alpha))
}

fn sym_m6(seed: u64) -> Result<String> {
    let mut g = random::rng(seed);
    let re = random::realization(&mut g, Some(RealizationKind::Symmetric), 6, 2, 2, true)?;
    let t_vh = IndexTuple::cat(&[&IndexTuple::range(-6, -3), &IndexTuple::range(-6, -5)]);
    let s = structured::symmetric_linearization(&SymGfprSpec::new(0, IndexTuple::empty(), t_vh), &re)?;
    s.check(0.0)?;
    expect_pattern(
        &s.pencil,
        "0, 0, 0, 0, -A6, lA6, 0;
         0, 0, 0, -A6, lA6 - A5, lA5, 0;
         0, 0, -A6, lA6 - A5, lA5 - A4, lA4, 0;
         0, -A6, lA6 - A5, lA5 - A4, lA4 - A3, lA3, 0;
         -A6, lA6 - A5, lA5 - A4, lA4 - A3, lA3 - A2, lA2, 0;
         lA6, lA5, lA4, lA3, lA2, lA1 + A0, Bt;
         0, 0, 0, 0, 0, B, A - lE",
        &Symbols::of(&re, zeros(2, 2), zeros(2, 2)),
    )?;
    Ok(format!("border at block {}", 6 - s.alpha))
}

fn t_even_m5(seed: u64) -> Result<String> {
    structured_case(
        seed,
        RealizationKind::TEven,
        5,
        2,
        |re| structured::t_even_linearization(2, 0, re),
        &[1, 1, -1, 1, -1],
        "0, -I, lI, 0, 0, 0;
         -I, lA5 - A4, lA4, 0, 0, 0;
         -lI, -lA4, -lA3 - A2, -A1, I, 0;
         0, 0, A1, -lA1 + A0, lI, Bt;
         0, 0, I, -lI, 0, 0;
         0, 0, 0, B, 0, A - lE",
    )
}

fn t_even_m4(seed: u64) -> Result<String> {
    structured_case(
        seed,
        RealizationKind::TEven,
        4,
        2,
        |re| structured::t_even_linearization(0, 3, re),
        &[1, -1, 1, -1],
        "0, 0, -A4, lA4, 0;
         0, A4, -lA4 + A3, -lA3, 0;
         -A4, lA4 - A3, lA3 - A2, lA2, 0;
         -lA4, -lA3, -lA2, -lA1 - A0, Bt;
         0, 0, 0, B, A - lE",
    )
}

fn t_odd_m5(seed: u64) -> Result<String> {
    structured_case(
        seed,
        RealizationKind::TOdd,
        5,
        2,
        |re| structured::t_odd_linearization(2, 0, re),
        &[1, -1, 1, -1, -1],
        "0, -I, lI, 0, 0, 0;
         I, -lA5 + A4, -lA4, 0, 0, 0;
         lI, lA4, lA3 + A2, A1, -I, 0;
         0, 0, -A1, lA1 - A0, -lI, -Bt;
         0, 0, I, -lI, 0, 0;
         0, 0, 0, B, 0, lI - A",
    )
}

fn t_odd_m4(seed: u64) -> Result<String> {
    structured_case(
        seed,
        RealizationKind::TOdd,
        4,
        2,
        |re| structured::t_odd_linearization(0, 3, re),
        &[1, -1, 1, -1],
        "0, 0, -A4, lA4, 0;
         0, A4, -lA4 + A3, -lA3, 0;
         -A4, lA4 - A3, lA3 - A2, lA2, 0;
         -lA4, -lA3, -lA2, -lA1 - A0, -Bt;
         0, 0, 0, B, lI - A",
    )
}

fn skew_m5(seed: u64) -> Result<String> {
    let e = IndexTuple::empty();
    structured_case(
        seed,
        RealizationKind::SkewSymmetric,
        5,
        2,
        |re| structured::skew_symmetric_linearization(2, 0, &e, &e, re),
        &[1, -1, -1, -1, 1],
        "0, -I, lI, 0, 0, 0;
         I, -lA5 + A4, -lA4, 0, 0, 0;
         -lI, -lA4, -lA3 - A2, -A1, I, 0;
         0, 0, -A1, lA1 - A0, -lI, -Bt;
         0, 0, -I, lI, 0, 0;
         0, 0, 0, B, 0, lE - A",
    )
}

fn skew_m4(seed: u64) -> Result<String> {
    let e = IndexTuple::empty();
    structured_case(
        seed,
        RealizationKind::SkewSymmetric,
        4,
        2,
        |re| structured::skew_symmetric_linearization(2, 1, &e, &e, re),
        &[1, 1, 1, -1],
        "-A4, lA4, 0, 0, 0;
         lA4, lA3 + A2, A1, -I, 0;
         0, A1, -lA1 + A0, lI, -Bt;
         0, I, -lI, 0, 0;
         0, 0, B, 0, lE - A",
    )
}

fn rciss_m11(_: u64) -> Result<String> {
    let r = IndexTuple::range;
    let alpha = IndexTuple::cat(&[&r(8, 10), &IndexTuple::new(vec![7, 6, 5]), &r(2, 4), &IndexTuple::new(vec![1, 0])]);
    let beta = IndexTuple::cat(&[
        &IndexTuple::new(vec![10, 9]),
        &r(5, 8),
        &r(3, 4),
        &IndexTuple::new(vec![2]),
        &r(0, 1),
    ]);
    let (a, b) = (rciss(&alpha)?.flat(), rciss(&beta)?.flat());
    if a != [2, 4, 2, 2] || b != [0, 2, 3, 1, 1, 2, 1, 0] {
        return Err(fail(format!("got {a:?} and {b:?}")));
    }
    Ok(format!("{a:?}, {b:?}"))
}

fn c0_example(_: u64) -> Result<String> {
    let c = consecutions(&IndexTuple::new(vec![1, 0, 2, 1, 3, 2, 4, 1, 3, 2, 1]), 0);
    if c != 3 {
        return Err(fail(format!("c0 = {c}")));
    }
    Ok("c0 = 3".into())
}

fn shift_m4(_: u64) -> Result<String> {
    let a = IndexTuple::new(vec![1, 2, 3, 0]);
    let (i, c) = (index_shift(&a, Side::Right)?, index_shift(&a, Side::Left)?);
    if (i, c) != (1, 2) {
        return Err(fail(format!("i = {i}, c = {c}")));
    }
    Ok("i = 1, c = 2".into())
}

fn sym_shift(seed: u64) -> Result<String> {
    let mut g = random::rng(seed);
    for m in [3usize, 5, 7] {
        for h in (0..m).step_by(2) {
            let re = random::realization(&mut g, Some(RealizationKind::Symmetric), m, 1, 0, false)?;
            let s = structured::symmetric_linearization(&SymGfprSpec::new(h, IndexTuple::empty(), IndexTuple::empty()), &re)?;
            let alpha = s.recipe.alpha(m)?;
            let (i, c) = (index_shift(&alpha, Side::Right)?, index_shift(&alpha, Side::Left)?);
            if i != (m - 1) / 2 || c != (m - 1) / 2 {
                return Err(fail(format!("m = {m}, h = {h}: i = {i}, c = {c}")));
            }
        }
    }
    Ok("i = c = (m-1)/2".into())
}

fn odd_h(seed: u64) -> Result<String> {
    let mut count = 0;
    for h in [1usize, 3, 5] {
        for (t, c, i) in structured::odd_h_obstructions(h) {
            if c == i {
                return Err(fail(format!("h = {h}, t = {t}: c0 = i0 = {c}")));
            }
            count += 1;
        }
    }
    let mut g = random::rng(seed);
    let re = random::realization(&mut g, Some(RealizationKind::Symmetric), 4, 1, 0, true)?;
    match structured::symmetric_linearization(&SymGfprSpec::new(1, IndexTuple::empty(), IndexTuple::empty()), &re) {
        Err(Error::Structural(_)) => Ok(format!("{count} canonical tuples checked, h = 1 rejected")),
        other => Err(fail(format!("h = 1 was not rejected: {other:?}"))),
    }
}

fn cm_battery(_: u64) -> Result<String> {
    let s = |v: f64| DMatrix::from_element(1, 1, v);
    let p = MatrixPolynomial::new(vec![s(0.0), s(1.0)])?;
    let grid = CmGrid::default();
    let cases = [
        (Realization::symmetric(p.clone(), s(1.0), s(1.0), s(1.0))?, 1),
        (Realization::symmetric(p.clone(), s(1.0), s(-1.0), s(-1.0))?, -1),
        (
            Realization::symmetric(
                p,
                DMatrix::from_row_slice(2, 1, &[1.0, 1.0]),
                DMatrix::identity(2, 2),
                DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]),
            )?,
            2,
        ),
    ];
    let mut got = Vec::new();
    for (re, want) in &cases {
        let k = cauchy_maslov_index(re, &grid)?.index;
        if k != *want {
            return Err(fail(format!("index {k}, expected {want}")));
        }
        got.push(k);
    }
    Ok(format!("{got:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_parses() {
        let p = parse_pattern("lA1 - A0, Bt; B, A - lE").unwrap();
        assert_eq!(p.m(), 1);
        assert_eq!(p.rows[0][0].len(), 2);
        assert_eq!(p.rows[0][0][1], Term { sign: -1, lambda: false, sym: Sym::Coef(0) });
        assert!(parse_pattern("Q, 0; 0, 0").is_err());
    }

    const T_ODD_M5: &str = "0, -I, lI, 0, 0, 0;
         I, -lA5 + A4, -lA4, 0, 0, 0;
         lI, lA4, lA3 + A2, A1, -I, 0;
         0, 0, -A1, lA1 - A0, -lI, -Bt;
         0, 0, I, -lI, 0, 0;
         0, 0, 0, B, 0, lI - A";

    fn t_odd(shown: &[i8], text: &str) -> Result<String> {
        structured_case(3, RealizationKind::TOdd, 5, 2, |re| structured::t_odd_linearization(2, 0, re), shown, text)
    }

    #[test]
    fn flipped_sign_is_caught() {
        assert!(t_odd(&[1, -1, 1, -1, -1], T_ODD_M5).is_ok());
        let bad = T_ODD_M5.replace("lA1 - A0", "lA1 + A0");
        assert!(matches!(t_odd(&[1, -1, 1, -1, -1], &bad), Err(Error::CheckFailed(_))));
    }

    #[test]
    fn raw_pencil_differs_from_display_by_leading_sign() {
        // Taking the constructor's own Q skips the sign fix and must fail.
        let err = t_odd(&[-1, 1, -1, 1, 1], T_ODD_M5).unwrap_err();
        assert!(err.to_string().contains("block (1, 2)"), "{err}");
    }

    #[test]
    fn corpus_passes() {
        for o in run_all(1) {
            assert!(o.passed, "{}: {}", o.id, o.detail);
        }
    }
}
