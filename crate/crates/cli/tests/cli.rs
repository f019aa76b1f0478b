use std::path::PathBuf;
use std::process::{Command, Output};

use hopfc_core::bundle::{builtin_bundle, bundle_to_json};
use hopfc_core::validate::corruption_fixtures;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn hopfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hopfc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn invariant_of_trefoil_fixture() {
    let f = fixture("trefoil_plus1.tangle");
    let o = hopfc(&["invariant", "--bundle", "zmod2", "--alpha", "uniform", f.to_str().unwrap()]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("b_minus=0 n_L=1"), "{s}");
    assert!(s.contains("tau="), "{s}");
}

#[test]
fn translate_sigma12_is_one_pairing() {
    let o = hopfc(&["translate", fixture("sigma12.braid").to_str().unwrap()]);
    assert!(o.status.success());
    let body: Vec<String> =
        stdout(&o).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect();
    assert_eq!(body, ["hd n=2", "0 w+ 0"]);
}

#[test]
fn confluence_reports_no_failures() {
    let o = hopfc(&["confluence", "--max-size", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("failures=0"));
}

#[test]
fn trace_output_is_reingestible() {
    let f = fixture("trefoil_plus1.tangle");
    let traced = hopfc(&["--trace", "translate", f.to_str().unwrap()]);
    let plain = hopfc(&["translate", f.to_str().unwrap()]);
    let hd = scratch("trefoil.hd", &stdout(&traced));
    let a = hopfc(&["evaluate", "--bundle", "zmod3", "--alpha", "uniform", hd.to_str().unwrap()]);
    let hd2 = scratch("trefoil_plain.hd", &stdout(&plain));
    let b = hopfc(&["evaluate", "--bundle", "zmod3", "--alpha", "uniform", hd2.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    // the diagram re-ingested through phi and normalize still parses
    assert!(hopfc(&["phi", hd.to_str().unwrap()]).status.success());
    assert!(hopfc(&["normalize", hd.to_str().unwrap()]).status.success());
}

#[test]
fn output_is_deterministic() {
    let f = fixture("trefoil_plus1.tangle");
    let args = ["--json", "invariant", "--bundle", "zmod4", "--alpha", "unit", f.to_str().unwrap()];
    let a = hopfc(&args);
    let b = hopfc(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["n_L"], 1);
    assert_eq!(v["linking"], serde_json::json!([[1]]));
}

#[test]
fn parse_errors_cite_file_and_line() {
    let bad = scratch("bad.hd", "hd n=1\n0 bogus 0\n");
    let o = hopfc(&["normalize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.hd:2:"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn kirby_json_has_exact_scalars() {
    let o = hopfc(&["--json", "kirby", "--bundle", "zmod4", "--alpha", "uniform"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kirby_ok"], true);
    assert!(v["theta_plus_alpha"].as_str().unwrap().starts_with('['));
}

#[test]
fn selftest_filter_runs_one_suite() {
    let o = hopfc(&["selftest", "--filter", "gauss"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("PASS [11] gauss-sum"), "{s}");
    assert!(s.contains("1/1 suites passed"));
    assert_eq!(hopfc(&["selftest", "--filter", "nonsense"]).status.code(), Some(2));
}

#[test]
fn selftest_fails_on_corrupted_bundle() {
    let base = builtin_bundle("zmod2").unwrap();
    let fx = &corruption_fixtures(&base, 1)[0];
    let path = scratch("corrupt.json", &serde_json::to_string(&bundle_to_json(&fx.bundle)).unwrap());
    let o = hopfc(&["selftest", "--filter", "bundle-axioms", "--bundle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [10] bundle-axioms"));
}
