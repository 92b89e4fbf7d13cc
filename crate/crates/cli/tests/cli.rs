use std::path::{Path, PathBuf};
use std::process::Command;

use tweq_cli::{load_spec, parse_spec, render_json, render_text, run, to_json, RunOptions, RunReport, TaskOutput};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(format!("{name}.json"))
}

fn report(name: &str, tasks: &[&str], opts: RunOptions) -> RunReport {
    let spec = load_spec(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let tasks: Vec<String> = tasks.iter().map(|t| t.to_string()).collect();
    run(&spec, &tasks, &opts).expect("known tasks")
}

fn task<'a>(r: &'a RunReport, name: &str) -> &'a TaskOutput {
    &r.tasks.iter().find(|t| t.task == name).unwrap_or_else(|| panic!("no {name} in report")).output
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Compares against `tests/golden/<name>.txt`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, text: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(squash(text), squash(&want), "golden mismatch for {name}");
}

const FIXTURES: [&str; 7] = ["circle-circle", "free-rotation", "point", "su2-ce", "s1xcpk", "t2-averaging", "jacobi-failure"];

#[test]
fn every_fixture_loads_and_round_trips() {
    for name in FIXTURES {
        let spec = load_spec(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_spec(&to_json(&spec)).unwrap();
        assert_eq!(spec, again, "{name}");
        assert_eq!(to_json(&spec), to_json(&again));
    }
}

#[test]
fn schema_errors_carry_paths() {
    let bad = r#"{"name":"x","lie":{"dim":1,"structure_constants":[[3,0,0,"1/0"]]},
        "manifold":{"torus":{"n":1}},"action":{"fields":[{"torus":["0"]}],"xi":[[{"coeff":"a","dtheta":[4]}]]}}"#;
    let errs = parse_spec(bad).unwrap_err().0;
    let paths: Vec<&str> = errs.iter().map(|e| e.path.as_str()).collect();
    assert!(paths.contains(&"lie.structure_constants[0]"), "{paths:?}");
    assert!(paths.contains(&"action.xi[0][0].dtheta"), "{paths:?}");
    assert!(paths.contains(&"action.xi[0][0].coeff"), "{paths:?}");
    let syntax = parse_spec("{\"name\": }").unwrap_err().0;
    assert!(syntax[0].path.starts_with("line 1"));
    let unknown = parse_spec(r#"{"name":"x","lie":{"dim":0},"manifold":{"torus":{"n":0}},"action":{"fields":[],"xi":[]},"extra":1}"#);
    assert!(unknown.is_err());
}

#[test]
fn jacobi_failure_passes_schema_but_fails_validation() {
    let r = report("jacobi-failure", &["validate"], RunOptions::default());
    assert!(!r.passed);
    let err = r.tasks[0].error.as_deref().unwrap();
    assert!(err.contains("Jacobi") && err.contains("[0, 1, 2]"), "{err}");
    golden("jacobi-failure", &render_text(&r));
}

#[test]
fn circle_circle_tower_limit() {
    let opts = RunOptions { levels: Some(6), ..Default::default() };
    let r = report("circle-circle", &["tower"], opts);
    assert!(r.passed);
    let TaskOutput::Levels { levels, maps, limit } = task(&r, "tower") else { panic!() };
    assert_eq!(levels.len(), 7);
    assert!(levels.iter().all(|l| l.dims == [1, 1]));
    assert_eq!(maps.len(), 6);
    let l = limit.as_ref().unwrap();
    assert_eq!(l.ranks, [Some(0), Some(1)]);
    assert_eq!(l.generators[1], vec!["dθ".to_string()]);
    golden("circle-circle-tower", &render_text(&r));
}

#[test]
fn circle_circle_comparison_is_unequal() {
    let r = report("circle-circle", &["compare-completed-uncompleted"], RunOptions::default());
    let TaskOutput::Compare { equal, completed, tensored, .. } = task(&r, "compare") else { panic!() };
    assert!(!equal);
    assert_eq!(completed[1], "finite rank 1");
    assert_eq!(tensored[1], "not finitely generated");
    golden("circle-circle-compare", &render_text(&r));
}

#[test]
fn s1_cp_family_over_k() {
    let opts = RunOptions { k_range: Some(1..=5), ..Default::default() };
    let r = report("s1xcpk", &["cohomology"], opts);
    let TaskOutput::Levels { levels, limit, .. } = task(&r, "cohomology") else { panic!() };
    assert_eq!(levels.len(), 5);
    for (k, l) in (1..=5).zip(levels) {
        assert_eq!(l.dims, [1, 1], "k={k}");
        assert_eq!(l.odd, vec!["dth".to_string()]);
    }
    let l = limit.as_ref().unwrap();
    assert_eq!(l.ranks, [Some(0), Some(1)]);
    assert_eq!(l.generators[1], vec!["dth".to_string()]);
    golden("s1xcpk-k1-5", &render_text(&r));
}

#[test]
fn free_rotation_and_point_towers() {
    let r = report("free-rotation", &[], RunOptions::default());
    let TaskOutput::Levels { limit, .. } = task(&r, "tower") else { panic!() };
    assert_eq!(limit.as_ref().unwrap().ranks, [Some(1), Some(0)]);
    golden("free-rotation", &render_text(&r));

    let r = report("point", &[], RunOptions::default());
    let TaskOutput::Levels { levels, limit, .. } = task(&r, "tower") else { panic!() };
    for (n, l) in levels.iter().enumerate() {
        assert_eq!(l.dims, [n + 1, 0]);
    }
    assert!(!limit.as_ref().unwrap().finitely_generated);
    golden("point", &render_text(&r));
}

#[test]
fn averaging_fixture() {
    let r = report("t2-averaging", &[], RunOptions::default());
    assert!(r.passed);
    let TaskOutput::Average { residual, .. } = task(&r, "average") else { panic!() };
    assert_eq!(residual, "0");
    golden("t2-averaging", &render_text(&r));
}

#[test]
fn su2_fixture_validates() {
    let r = report("su2-ce", &[], RunOptions::default());
    assert!(r.passed);
    golden("su2-ce", &render_text(&r));
}

#[test]
fn reports_are_deterministic_and_renderings_agree() {
    let opts = RunOptions { probes: 5, seed: Some(7), ..Default::default() };
    let a = report("circle-circle", &["validate", "tower", "verify"], opts.clone());
    let b = report("circle-circle", &["verify", "tower", "validate"], opts);
    assert_eq!(a, b);
    assert_eq!(a.tasks.iter().map(|t| t.task.as_str()).collect::<Vec<_>>(), ["validate", "tower", "verify"]);
    assert!(a.passed);
    let json: serde_json::Value = serde_json::from_str(&render_json(&a)).unwrap();
    assert_eq!(json["provenance"]["seed"], 7);
    let text = render_text(&a);
    assert!(text.contains(json["provenance"]["spec_sha256"].as_str().unwrap()));
    let checks = json["tasks"][2]["output"]["checks"].as_array().unwrap();
    for c in checks {
        assert!(text.contains(c["name"].as_str().unwrap()));
    }
}

#[test]
fn unknown_task_is_rejected() {
    let spec = load_spec(&fixture("circle-circle")).unwrap();
    assert!(run(&spec, &["frobnicate".into()], &RunOptions::default()).is_err());
}

fn tweq(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tweq")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn binary_exit_codes_and_formats() {
    let cc = fixture("circle-circle");
    let cc = cc.to_str().unwrap();
    let (code, out) = tweq(&["run", cc, "--task", "tower", "--levels", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("limit ranks: (0, 1)"));
    let (code, out) = tweq(&["limit", cc, "--levels", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tasks"][0]["output"]["limit"]["ranks"], serde_json::json!([0, 1]));
    let jf = fixture("jacobi-failure");
    assert_eq!(tweq(&["validate", jf.to_str().unwrap()]).0, 1);
    assert_eq!(tweq(&["validate", "/nonexistent.json"]).0, 2);
    let out_path = std::env::temp_dir().join("tweq-cli-test-report.txt");
    let (code, out) = tweq(&["cohomology", cc, "--levels", "1", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&out_path).unwrap().contains("N=1, K=3: ranks (1, 1)"));
}
