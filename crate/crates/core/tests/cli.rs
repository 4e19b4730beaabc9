use std::path::Path;
use std::process::{Command, Output};

fn bodi(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bodi-kit")).args(args).current_dir(cwd).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{"problem": "labs:10", "methods": ["bodi", "random"], "seeds": [1], "m": 8, "n_init": 4, "budget": 8}"#;

#[test]
fn run_writes_traces_summary_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let out = bodi(&["run", &cfg, "--out-dir", "out"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("out/bodi_labs_10_diverse_random_m8_seed1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "iteration,value,best_so_far,elapsed_s,dict_seed");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    // the first n_init rows come from the initial design and carry no dictionary seed
    assert!(rows[0].ends_with(','));
    assert!(!rows[7].ends_with(','));

    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/random_labs_10_seed1.json")).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["method"], "random");
    assert!(sidecar["environment"].is_object());

    let summary = std::fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn seed_override_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    let out = bodi(&["run", &cfg, "--seed", "9", "--format", "json", "--out-dir", "o"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/bodi_labs_10_diverse_random_m8_seed9.json")).unwrap())
            .unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert!(!dir.path().join("o/bodi_labs_10_diverse_random_m8_seed9.csv").exists());
}

#[test]
fn repeated_runs_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", SMALL);
    assert!(bodi(&["run", &cfg, "--out-dir", "a", "--workers", "1"], dir.path()).status.success());
    assert!(bodi(&["run", &cfg, "--out-dir", "b", "--workers", "2"], dir.path()).status.success());
    for name in ["bodi_labs_10_diverse_random_m8_seed1.csv", "random_labs_10_seed1.csv", "summary.csv"] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();

    let unknown = write(p, "unknown.json", r#"{"problem": "labs:10", "budget": 20, "mm": 3}"#);
    let out = bodi(&["run", &unknown], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mm"));

    let missing_budget = write(p, "nobudget.json", r#"{"problem": "labs:10"}"#);
    assert_eq!(bodi(&["run", &missing_budget], p).status.code(), Some(2));

    let bad_problem = write(p, "bad.json", r#"{"problem": "tsp:5", "budget": 20}"#);
    assert_eq!(bodi(&["run", &bad_problem], p).status.code(), Some(2));

    let small_budget = write(p, "small.json", r#"{"problem": "labs:10", "budget": 3, "n_init": 5}"#);
    assert_eq!(bodi(&["run", &small_budget], p).status.code(), Some(2));

    assert_eq!(bodi(&["run", "does-not-exist.json"], p).status.code(), Some(3));
    let no_wcnf = write(p, "wcnf.json", r#"{"problem": "maxsat:/nonexistent.wcnf", "budget": 20}"#);
    assert_eq!(bodi(&["run", &no_wcnf], p).status.code(), Some(3));

    assert_eq!(bodi(&["theory-check", "--d-max", "30"], p).status.code(), Some(2));
    assert_eq!(bodi(&["diagnose", "--n-test", "0"], p).status.code(), Some(2));
    assert_eq!(bodi(&["dict-stats", "--kind", "explicit"], p).status.code(), Some(2));
    assert_eq!(bodi(&["no-such-command"], p).status.code(), Some(2));
}

#[test]
fn theory_check_passes_and_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bodi(&["theory-check", "--trials", "20", "--d-max", "8", "--out-dir", "t"], dir.path());
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("t/theory_check.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert_eq!(table.matches("PASS").count(), 3);
}

#[test]
fn dict_stats_on_explicit_rows() {
    let dir = tempfile::tempdir().unwrap();
    let rows = write(dir.path(), "rows.json", "[[1,0,1,1],[0,1,0,0]]");
    let out = bodi(&["dict-stats", "--kind", "explicit", "--rows", &rows, "--format", "json"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coherence"], 4);
    assert_eq!(v["cardinality_bound"], "5");
}

#[test]
fn diagnose_writes_per_seed_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = bodi(
        &["diagnose", "--problem", "labs:12", "--n-train", "15", "--n-test", "10", "--m", "16", "--seeds", "0,1", "--kind", "diverse,naive", "--out-dir", "d"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("d/diagnose_naive_random_m16_seed1.json").exists());
    let summary = std::fs::read_to_string(dir.path().join("d/diagnose_summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn schema_is_closed_and_requires_problem_and_budget() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/experiment-config.v1.json")).unwrap();
    assert_eq!(schema["additionalProperties"], false);
    let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(required.contains(&"problem") && required.contains(&"budget"));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = bodi_kit::cli::parse_config(&std::fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!cfg.jobs().is_empty());
        n += 1;
    }
    assert!(n >= 3);
}
