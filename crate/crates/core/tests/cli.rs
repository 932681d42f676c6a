use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddtrans")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn build(dir: &Path, model: &str, eta: &str) -> String {
    let path = dir.join("alg.json");
    let path_str = path.to_str().unwrap().to_owned();
    let eta_arg = format!("--eta={eta}");
    let out = run(&["build", "--model", model, &eta_arg, "--out", &path_str]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path_str
}

#[test]
fn monster_law_holds_on_a_built_dihedral_five() {
    let dir = tempfile::tempdir().unwrap();
    let file = build(dir.path(), "dihedral:5", "-1/3");
    let out = run(&["fusion", &file, "--law", "M:4/3,-4/3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["tool"], "oddtrans");
    assert_eq!(r["results"].as_array().unwrap().len(), 5);
}

#[test]
fn monster_law_fails_on_dihedral_seven() {
    let out = run(&["fusion", "--model", "dihedral:7", "--eta=-1/5", "--law", "M:6/5,-6/5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], false);
}

#[test]
fn reports_are_deterministic() {
    let args = ["spectrum", "--model", "frobenius:5,2", "--eta", "2/5", "--axis", "0,3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(String::from_utf8_lossy(&a.stderr).contains("elapsed"));
}

#[test]
fn parallel_matches_sequential() {
    let base = ["fusion", "--model", "dihedral:5", "--eta=-1/3", "--law", "infer"];
    let seq = run(&base);
    let mut par_args = base.to_vec();
    par_args.push("--parallel");
    let par = run(&par_args);
    assert_eq!(report(&seq)["results"], report(&par)["results"]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum", "--model", "dihedral:5", "--eta", "2/5", "--axis", "5"],
        vec!["spectrum", "--model", "dihedral:4", "--eta", "2/5"],
        vec!["spectrum", "--model", "dihedral:5"],
        vec!["spectrum", "--model", "dihedral:5", "--eta", "1/0"],
        vec!["fusion", "--model", "dihedral:5", "--eta", "2/5", "--law", "X:1"],
        vec!["spectrum", "/nonexistent/alg.json"],
        vec!["audit", "--model", "dihedral:5", "--eta", "2/5", "--axis", "0,1,2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn bad_characteristic_needs_force() {
    let refused = run(&["spectrum", "--model", "dihedral:5", "--eta", "4", "--field", "F:5"]);
    assert_eq!(refused.status.code(), Some(2));
    let forced = run(&["form", "--model", "dihedral:5", "--eta", "4", "--field", "F:5", "--force"]);
    assert_ne!(forced.status.code(), Some(2));
}

#[test]
fn validate_reads_system_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("sys.json");
    std::fs::write(&good, r#"{"p":3,"conj":[[0,2,1],[2,1,0],[1,0,2]]}"#).unwrap();
    let out = run(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["n"], 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"p":3,"conj":[[0,2,1],[2,1,0],[1,1,2]]}"#).unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out)["results"]["issues"].as_array().unwrap().is_empty());
}

#[test]
fn verify_gm_round_trips_a_built_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let file = build(dir.path(), "frobenius:3,2", "2/5");
    let out = run(&["verify-gm", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verbs_agree_with_known_results() {
    let cases: &[(&[&str], i32)] = &[
        (&["miyamoto", "--model", "frobenius:5,2", "--eta", "2/5"], 0),
        (&["ideal", "--model", "dihedral:7", "--eta", "2/5", "--axis", "0,3"], 0),
        (&["closure", "--model", "frobenius:5,2", "--eta", "2/5", "--axis", "0,1"], 0),
        (&["form", "--model", "dihedral:5", "--eta=-1/3"], 0),
        (&["form", "--model", "dihedral:5", "--eta", "2/5"], 1),
        (&["audit", "--model", "dihedral:5", "--eta=-1/3", "--axis", "0,1"], 1),
        (&["spectrum", "--model", "dihedral:5", "--eta", "2/5", "--side", "right"], 1),
    ];
    for (args, code) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn text_format_projects_the_report() {
    let out = run(&["closure", "--model", "dihedral:5", "--eta", "2/5", "--axis", "0,1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass: true"));
    assert!(text.contains("dim: 5"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["miyamoto", "--model", "dihedral:5", "--eta", "2/5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["results"]["order"]["exact"], 10);
}

#[test]
fn defective_right_operator_reports_failure() {
    let out = run(&["fusion", "--model", "dihedral:5", "--eta", "2/5", "--side", "right", "--law", "M:4/3,-4/3"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert!(r["results"]["error"].as_str().unwrap().contains("deficit 2"));
}
