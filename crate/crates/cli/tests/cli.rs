use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn ildtt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ildtt")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(file: &str) -> String {
    corpus(file).display().to_string()
}

#[test]
fn check_accepts_a_good_module() {
    let o = ildtt(&["--ext", "check", &p("pi_lolli.ildtt")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ildtt(&["--ext", "check", &p("seely.ildtt"), &p("frobenius.ildtt"), &p("sigma_tensor.ildtt")])), 0);
}

#[test]
fn check_without_ext_misses_the_bang_uniqueness_step() {
    let o = ildtt(&["check", &p("pi_lolli.ildtt")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pi_lolli.ildtt:"));
}

#[test]
fn check_rejects_linearity_violations_with_spans_and_rules() {
    let o = ildtt(&["check", &p("negative/contraction.ildtt")]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("contraction.ildtt:6:1: error:"), "{}", err);
    assert!(err.contains("[Lin-Var]"));
}

#[test]
fn check_takes_several_paths_and_reports_in_order() {
    let o = ildtt(&["--format", "lines", "check", &p("seely.ildtt"), &p("negative/weakening.ildtt")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let first_bad = out.lines().position(|l| l.contains("weakening.ildtt")).unwrap();
    assert!(out.lines().take(first_bad).all(|l| l.contains("seely.ildtt")));
    for l in out.lines() {
        assert_eq!(l.split('\t').count(), 5, "{}", l);
    }
}

#[test]
fn norm_prints_the_round_trip_endpoint() {
    let o = ildtt(&["norm", &p("pi_lolli.ildtt"), "--def", "roundtrip_g_f"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "y");
}

#[test]
fn norm_of_an_unknown_definition_is_a_usage_error() {
    assert_eq!(code(&ildtt(&["norm", &p("pi_lolli.ildtt"), "--def", "nope"])), 2);
}

#[test]
fn eq_prints_a_verdict() {
    let f = p("pi_lolli.ildtt");
    let o = ildtt(&["eq", &f, "--ctx", "(y : Pi !x:A. B)", "--left", "g[f/y']", "--right", "y"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "true".into()));
    let o = ildtt(&["eq", &p("two.ildtt"), "--left", "tt", "--right", "ff"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (1, "false".into()));
}

#[test]
fn eq_flags_select_the_mode() {
    let f = p("sigma_tensor.ildtt");
    let args = ["eq", &f, "--ctx", "(y : Sg !x:A. B)", "--left", "g[f/y']", "--right", "y"];
    assert_eq!(stdout(&ildtt(&args)).trim(), "false");
    let mut ext = vec!["--ext"];
    ext.extend(args);
    assert_eq!(stdout(&ildtt(&ext)).trim(), "true");
    let mut starved = vec!["--ext=0"];
    starved.extend(args);
    assert_ne!(stdout(&ildtt(&starved)).trim(), "true");
    // without η the expanded round trip differs from the variable
    let g = p("pi_lolli.ildtt");
    let o = ildtt(&["--no-eta", "eq", &g, "--ctx", "(y : Pi !x:A. B)", "--left", "\\!x:A. y !x", "--right", "y"]);
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn eval_reports_the_new_basepoint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m.cfg");
    std::fs::write(&cfg, "type B(0) = 1\ntype B(1) = 3\ntype B(2) = 2\n").unwrap();
    let o = ildtt(&["eval", &p("bang.ildtt"), "--backend", "pset", "--model", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for (b, bang) in [(1, 2), (3, 4), (2, 3)] {
        assert!(out.contains(&format!("size B = {}, size !B = {}", b, bang)), "{}", out);
    }
    std::fs::write(&cfg, "type B(*) = 2\n").unwrap();
    let o = ildtt(&["eval", &p("bang.ildtt"), "--backend", "gf2", "--model", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("dim B = 2, dim !B = 4").count(), 4);
}

#[test]
fn eval_needs_a_backend_and_a_model() {
    assert_eq!(code(&ildtt(&["eval", &p("bang.ildtt"), "--backend", "pset"])), 2);
    assert_eq!(code(&ildtt(&["eval", &p("bang.ildtt"), "--model", "x.cfg"])), 2);
    assert_eq!(code(&ildtt(&["eval", &p("bang.ildtt"), "--backend", "pset", "--model", "/nonexistent"])), 2);
}

#[test]
fn corpus_runs_the_manifest() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let o = ildtt(&["corpus", root.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("rule coverage complete"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&ildtt(&[])), 2);
    assert_eq!(code(&ildtt(&["frobnicate"])), 2);
    assert_eq!(code(&ildtt(&["check"])), 2);
}

#[test]
fn unreadable_input_fails() {
    assert_eq!(code(&ildtt(&["check", "/nonexistent.ildtt"])), 1);
}
