//! End-to-end tests of the binary: exit codes, JSON schemas against golden
//! files, and the corpus runner.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_murec"))
}

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(rel: &str) -> String {
    repo_root().join("corpus").join(rel).display().to_string()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn goodness_exit_codes() {
    let good = run(&["goodness", &corpus("systems/case1.eqs")]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(stdout(&good).trim(), "good");

    let bad = run(&["goodness", &corpus("systems/delta.eqs")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("not good"));
    assert!(stdout(&bad).contains("X -> T"), "witness must be printed");
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["goodness", "no/such/file.eqs"]);
    assert_eq!(out.status.code(), Some(2));
    let bad_flag = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn equiv_exit_codes() {
    let eqs = corpus("systems/inf.eqs");
    let yes = run(&["equiv", "--eqs", &eqs, "X", "(X -> Bool) -> Bool"]);
    assert_eq!(yes.status.code(), Some(0));
    let no = run(&["equiv", "--eqs", &eqs, "X", "Bool"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn check_accepts_and_rejects() {
    let eqs = corpus("systems/inf.eqs");
    let term = corpus("numerals/inf1.term");
    let ok = run(&[
        "check",
        "--eqs",
        &eqs,
        "--expect",
        "((X -> X) -> X -> X) -> Bool",
        &term,
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let wrong = run(&["check", "--eqs", &eqs, "--expect", "Bool", &term]);
    assert_eq!(wrong.status.code(), Some(1));
    // ill-typed input is a negative verdict, not a usage error
    let ill = run(&["check", "--eqs", &eqs, "\\x:Bool. x x"]);
    assert_eq!(ill.status.code(), Some(1));
}

#[test]
fn normalize_and_fuel() {
    let out = run(&["normalize", "(\\x:X. x) y"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "y");

    let dd = corpus("recursion/delta_delta.term");
    let exhausted = run(&["normalize", "--fuel", "50", &dd]);
    assert_eq!(exhausted.status.code(), Some(1));
    assert!(stdout(&exhausted).contains("fuel exhausted"));

    // the environment variable sets the default fuel
    let via_env = bin()
        .env("MUREC_FUEL", "50")
        .args(["normalize", &dd])
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(1));
}

#[test]
fn normalize_strategies_agree() {
    let eqs = corpus("systems/inf.eqs");
    let term = format!(
        "({}) ({})",
        std::fs::read_to_string(corpus("numerals/inf1.term"))
            .unwrap()
            .trim(),
        std::fs::read_to_string(corpus("numerals/church1.term"))
            .unwrap()
            .trim()
    );
    let left = run(&["normalize", "--eqs", &eqs, &term]);
    let ex = run(&[
        "normalize",
        "--eqs",
        &eqs,
        "--strategy",
        "exhaustive",
        &term,
    ]);
    assert_eq!(left.status.code(), Some(0));
    assert_eq!(ex.status.code(), Some(0));
    assert_eq!(stdout(&left).trim(), "\\a:Y. \\b:Y. a");
    assert_eq!(stdout(&left), stdout(&ex));
}

#[test]
fn golden_analyze_case4() {
    let out = run(&["analyze", "--json", &corpus("systems/case4.eqs")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("analyze_case4.json"));
}

#[test]
fn golden_goodness_delta() {
    let out = run(&["goodness", "--json", &corpus("systems/delta.eqs")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), golden("goodness_delta.json"));
}

#[test]
fn golden_check_one() {
    let out = run(&[
        "check",
        "--json",
        "--eqs",
        &corpus("systems/inf.eqs"),
        "--expect",
        "Bool",
        &corpus("numerals/one.term"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("check_one.json"));
}

#[test]
fn golden_trace_chain() {
    let out = run(&["trace", "--json", "(\\x:X. x) ((\\y:X. y) z)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("trace_chain.json"));
}

#[test]
fn golden_sn_delta_delta() {
    let out = run(&[
        "sn",
        "--json",
        "--eqs",
        &corpus("systems/delta.eqs"),
        &corpus("recursion/delta_delta.term"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), golden("sn_delta_delta.json"));
}

#[test]
fn golden_eta_two() {
    let out = run(&["eta", "--json", "(\\f:X -> X. \\x:X. f (f x)) (\\u:X. u) v"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("eta_two.json"));
}

#[test]
fn golden_translate_mu_app() {
    let out = run(&[
        "translate",
        "--json",
        "--ctx",
        &corpus("classical/mu_app.ctx"),
        "--verify",
        &corpus("classical/mu_app.term"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("translate_mu_app.json"));
}

#[test]
fn translate_rejects_equation_files() {
    let out = run(&[
        "translate",
        "--eqs",
        &corpus("systems/inf.eqs"),
        &corpus("classical/peirce.term"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_run_passes() {
    let dir = repo_root().join("corpus").display().to_string();
    let out = run(&["corpus", "run", "--dir", &dir]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("0 failed"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn corpus_run_filter() {
    let dir = repo_root().join("corpus").display().to_string();
    let out = run(&[
        "corpus", "run", "--dir", &dir, "--filter", "inf1-vs", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["entries"].as_array().unwrap().len(), 6);
    assert_eq!(parsed["failed"], 0);
}

#[test]
fn corpus_detects_injected_failures() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::create_dir_all(root.join("systems")).unwrap();
    std::fs::copy(
        repo_root().join("corpus/systems/inf.eqs"),
        root.join("systems/inf.eqs"),
    )
    .unwrap();
    std::fs::write(root.join("ok.term"), "\\a:Y. \\b:Y. a\n").unwrap();
    std::fs::write(
        root.join("right.toml"),
        "name = \"right\"\neqs = \"systems/inf.eqs\"\nterm = \"ok.term\"\nexpect_type = \"Bool\"\n",
    )
    .unwrap();
    std::fs::write(
        root.join("wrong.toml"),
        "name = \"wrong\"\neqs = \"systems/inf.eqs\"\nterm = \"ok.term\"\nexpect_type = \"X\"\n",
    )
    .unwrap();
    let out = run(&["corpus", "run", "--dir", &root.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("PASS right"));
    assert!(text.contains("FAIL wrong"));
    assert!(text.contains("1 passed, 1 failed"));
}

#[test]
fn corpus_empty_directory_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["corpus", "run", "--dir", &dir.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no entries"));
}

#[test]
fn golden_trace_mu_twice() {
    let out = run(&[
        "trace",
        "--json",
        "--ctx",
        &corpus("classical/mu_twice.ctx"),
        &corpus("classical/mu_twice.term"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("trace_mu_twice.json"));
}

#[test]
fn normalize_contracts_mu_redexes() {
    let out = run(&[
        "normalize",
        "--ctx",
        &corpus("classical/mu_app.ctx"),
        &corpus("classical/mu_app.term"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "mu a:V. [a] f n");
}
