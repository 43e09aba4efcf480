use nalgebra::DMatrix;
use ratlin::corpus::{compare, parse_pattern, Symbols};
use ratlin::json::{self, BundleJson, PencilJson, ProblemFile};
use ratlin::realize::eval_g;
use ratlin::C64;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn ratlin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratlin")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn problem(name: &str) -> ProblemFile {
    json::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

#[test]
fn gfpr_build_matches_the_decorated_display() {
    let out = tmp("ex33.json");
    let o = ratlin(&["build", "--kind", "gfpr", "--problem", s(&data("ex33.json")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout_json(&o);
    assert_eq!(report["exact"], true);
    assert_eq!(report["c_block"], 3);
    assert_eq!(report["b_block"], 3);
    let pencil: PencilJson = json::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let l = pencil.to_exact().unwrap().expect("integer pencil");
    let re = problem("ex33.json").realization.to_exact().unwrap().unwrap();
    let x = DMatrix::from_row_slice(2, 2, &[1, 2, 0, 1]);
    let y = DMatrix::from_row_slice(2, 2, &[2, -1, 1, 1]);
    let pattern = parse_pattern(
        "lA4 + A3, -X, -Y, -I, 0;
         A2, lX - I, lY, lI, 0;
         A1, lI, A0, 0, C;
         -I, 0, lI, 0, 0;
         0, 0, B, 0, A - lE",
    )
    .unwrap();
    assert_eq!(compare(&l, &pattern, &Symbols::of(&re, x, y)).unwrap(), None);
}

#[test]
fn symmetric_h2_is_penta_diagonal() {
    let o = ratlin(&["build", "--kind", "structured:symmetric", "--h", "2", "--problem", s(&data("sym5.json"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["pattern"]["bandwidth"], 2);
    assert_eq!(v["report"]["structure_ok"], true);
    assert_eq!(v["pencil"]["structure"], "symmetric");
}

#[test]
fn odd_h_exits_with_structural_code() {
    let o = ratlin(&["structured", "--kind", "symmetric", "--h", "3", "--spec", s(&data("sym5.json"))]);
    assert_eq!(o.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "structural");
    assert_eq!(err["code"], 4);
}

#[test]
fn proxy_suite_passes_on_fiedler_pencil() {
    let out = tmp("fp4.json");
    assert!(ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp4.json")), "--out", s(&out)]).status.success());
    let o = ratlin(&["verify", "--pencil", s(&out), "--system", s(&data("fp4.json")), "--suite", "proxy"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn corrupted_pencil_fails_det_proportionality() {
    let out = tmp("fp4-bad.json");
    assert!(ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp4.json")), "--out", s(&out)]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let e = &mut v["X"][0][0];
    *e = Value::from(e.as_i64().unwrap() + 1);
    std::fs::write(&out, v.to_string()).unwrap();
    let o = ratlin(&["verify", "--pencil", s(&out), "--system", s(&data("fp4.json"))]);
    assert_eq!(o.status.code(), Some(6));
    let r = stdout_json(&o);
    assert_eq!(r["passed"], false);
    let det = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "det-proportionality").unwrap();
    assert_eq!(det["passed"], false);
}

#[test]
fn appendix_suite_passes_for_m3() {
    let out = tmp("fp3.json");
    assert!(ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp3.json")), "--out", s(&out)]).status.success());
    let o = ratlin(&["verify", "--pencil", s(&out), "--system", s(&data("fp3.json")), "--suite", "appendix", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn full_suite_on_structured_pencil() {
    let out = tmp("sym5.json");
    let o = ratlin(&["structured", "--kind", "symmetric", "--spec", s(&data("sym5.json")), "--out", s(&out)]);
    assert!(o.status.success());
    let o = ratlin(&["verify", "--pencil", s(&out), "--system", s(&data("sym5.json")), "--suite", "full", "--check-minimal"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let names: Vec<_> = stdout_json(&o)["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_owned()).collect();
    assert!(names.contains(&"structure".to_owned()) && names.contains(&"minimality".to_owned()), "{names:?}");
}

#[test]
fn gfp_build_and_appendix() {
    let out = tmp("gfp4.json");
    assert!(ratlin(&["build", "--kind", "gfp", "--problem", s(&data("gfp4.json")), "--out", s(&out)]).status.success());
    for suite in ["proxy", "appendix"] {
        let o = ratlin(&["verify", "--pencil", s(&out), "--system", s(&data("gfp4.json")), "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn recovered_eigenvector_solves_g() {
    let pencil = tmp("fp4-rec.json");
    assert!(ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp4.json")), "--out", s(&pencil)]).status.success());
    let eig = stdout_json(&ratlin(&["eig", "--pencil", s(&pencil)]));
    let mu = &eig["finite"][0]["value"];
    let mu = C64::new(mu[0].as_f64().unwrap(), mu[1].as_f64().unwrap());
    let basis = tmp("fp4-basis.json");
    let at = format!("{},{}", mu.re, mu.im);
    let o = ratlin(&["basis", "--pencil", s(&pencil), "--at", &at, "--out", s(&basis)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ratlin(&["recover", "--pencil", s(&pencil), "--basis", s(&basis), "--side", "right", "--to-g"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let x: BundleJson = serde_json::from_slice(&o.stdout).unwrap();
    let x = x.to_bundle().unwrap();
    assert_eq!(x.len(), 1);
    let x = x.matrix_at(C64::new(0.0, 0.0));
    let g = eval_g(&problem("fp4.json").realization.to_c64().unwrap(), mu).unwrap();
    let res = (&g * &x).norm();
    assert!(res <= 1e-8 * g.norm() * x.norm(), "residual {res}");
}

#[test]
fn examples_pass_and_ignore_seed() {
    let a = ratlin(&["examples", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let b = ratlin(&["examples", "--json", "--seed", "99"]);
    assert_eq!(b.status.code(), Some(0));
    let strip = |v: Value| -> Vec<(String, bool)> {
        v.as_array().unwrap().iter().map(|o| (o["id"].as_str().unwrap().to_owned(), o["passed"].as_bool().unwrap())).collect()
    };
    let (a, b) = (strip(stdout_json(&a)), strip(stdout_json(&b)));
    assert_eq!(a, b);
    assert!(a.iter().all(|(_, p)| *p));
}

#[test]
fn example_list_has_at_least_twelve_ids() {
    let o = ratlin(&["examples", "--list"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).lines().count() >= 12);
}

#[test]
fn unknown_keys_are_schema_errors() {
    let bad = tmp("bad.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("fp4.json")).unwrap()).unwrap();
    v["colour"] = Value::from("blue");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = ratlin(&["build", "--kind", "fp", "--problem", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let o = ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp4.json")), "--tol", r#"{"rnak": 1e-9}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_recipe_exit_code() {
    let bad = tmp("bad-recipe.json");
    std::fs::write(&bad, r#"{"sigma": [0, 0, 1, 2]}"#).unwrap();
    let o = ratlin(&["build", "--kind", "fp", "--problem", s(&data("fp4.json")), "--recipe", s(&bad)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn build_output_round_trips() {
    let o = ratlin(&["build", "--kind", "gfpr", "--problem", s(&data("ex33.json"))]);
    let text = String::from_utf8(o.stdout).unwrap();
    let built: ratlin::app::BuildOutput = json::parse(&text).unwrap();
    assert_eq!(json::render(&built, false).unwrap(), text.trim_end());
    // The whole build document is accepted where a pencil is expected.
    let path = tmp("built.json");
    std::fs::write(&path, &text).unwrap();
    let o = ratlin(&["verify", "--pencil", s(&path), "--system", s(&data("ex33.json"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cauchy_maslov_is_preserved() {
    let o = ratlin(&["cm-index", "--problem", s(&data("sym5.json")), "--linearized"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["preserved"], true);
    assert_eq!(v["g"]["index"], v["linearization"]["index"]);
}
