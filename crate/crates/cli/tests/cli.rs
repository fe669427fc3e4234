use std::process::{Command, Output};

fn equiweyl(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equiweyl"))
        .args(args)
        .current_dir(dir)
        .env_remove("EQUIWEYL_THREADS")
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sphere_counting_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = equiweyl(&["counting", "--manifold", "sphere", "--m", "0", "--lambda", "1e6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "count=1000 predicted=1000 dev=0");
    assert!(dir.path().join("reports/counting.json").exists());
    assert!(dir.path().join("reports/counting.csv").exists());
}

#[test]
fn report_is_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = equiweyl(&["statphase", "--preset", "gaussian", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("statphase: pass"));
    let text = std::fs::read_to_string(out.join("statphase.json")).unwrap();
    let r = equiweyl::lab::ExperimentReport::from_json(&text).unwrap();
    assert!(r.is_consistent());
    assert_eq!(r.verdict, equiweyl::lab::Verdict::Pass);
}

#[test]
fn negative_lambda_max_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = equiweyl(&["weyl", "--lambda-max", "-5", "--measure", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("lambda_max"), "{e}");
    assert!(e.contains("measure"), "{e}");
    assert!(!dir.path().join("reports").exists());
}

#[test]
fn unknown_subcommand_prints_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = equiweyl(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn config_file_unknown_key_names_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, "{\n  \"lambda\": 100,\n  \"lamda_max\": 3\n}\n").unwrap();
    let o = equiweyl(&["counting", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("lamda_max") && e.contains("line 3"), "{e}");
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"experiment": "counting", "manifold": "sphere", "m": 0, "lambda": 100}"#).unwrap();
    let o = equiweyl(&["counting", "--config", cfg.to_str().unwrap(), "--lambda", "1e6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "count=1000 predicted=1000 dev=0");
}

#[test]
fn keys_foreign_to_the_experiment_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = equiweyl(&["statphase", "--lambda", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda: not used by statphase"));
}

#[test]
fn failing_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"tolerances": {"sphere_weyl_rel": 1e-9}}"#).unwrap();
    let o = equiweyl(&["weyl", "--config", cfg.to_str().unwrap(), "--lambda-max", "1e4"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("weyl: fail"));
}

#[test]
fn quick_suite_subset_with_threads() {
    let dir = tempfile::tempdir().unwrap();
    let o = equiweyl(&["suite", "--quick", "--only", "addition,caustic", "--threads", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("addition: pass"));
    assert!(lines[1].starts_with("caustic: pass"));
    let o = equiweyl(&["suite", "--quick", "--only", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
