use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agentconv")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn analyze_prints_csv() {
    let out = run(&["analyze", "--scenario", &scenario("example2"), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("t,c_t,delta_t\n0,11,0\n"));
}

#[test]
fn workers_do_not_change_output() {
    let path = scenario("prop45");
    let one = run(&["analyze", "--scenario", &path, "--workers", "1"]);
    let eight = run(&["analyze", "--scenario", &path, "--workers", "8"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn export_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("example1.csv");
    let out = run(&[
        "export",
        "--scenario",
        &scenario("example1"),
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.contains("\n10,1,0\n"));
}

#[test]
fn crosscheck_passes_on_prop45() {
    let out = run(&["crosscheck", "--scenario", &scenario("prop45"), "--oracle-depth", "6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8(out.stdout).unwrap().contains("MISMATCH"));
}

#[test]
fn depth_zero_is_lower_bound_only() {
    let out = run(&["crosscheck", "--scenario", &scenario("example1"), "--oracle-depth", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("lower bound only"));
}

#[test]
fn validate_and_list_builders() {
    let out = run(&["validate", "--scenario", &scenario("korder")]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("agent states  4"));
    let out = run(&["list-builders"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("bounded_q"));
}

#[test]
fn seed_flag_changes_random_scenarios() {
    let path = scenario("random-tiny-seed1");
    let a = run(&["validate", "--scenario", &path]);
    let b = run(&["validate", "--scenario", &path, "--seed", "12345"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    assert_eq!(code(&run(&["analyze", "--scenario", "/nonexistent.json"])), 1);
    assert_eq!(code(&run(&["analyze", "--bogus"])), 1);
    assert_eq!(code(&run(&["analyze", "--scenario", &scenario("example2"), "--format", "xml"])), 1);

    let malformed = write("malformed.json", "{ \"name\": ");
    assert_eq!(code(&run(&["validate", "--scenario", &malformed])), 1);

    let invalid = write(
        "invalid.json",
        r#"{"name": "x", "interface": {"actions": ["a", "b"], "observations": ["o"]},
            "agent": {"builder": "constant", "dist": {"a": 0.9}},
            "environment": {"builder": "bandit", "rewards": {"a": 1.0}},
            "performance": {"kind": "myopic"}}"#,
    );
    assert_eq!(code(&run(&["validate", "--scenario", &invalid])), 2);

    let capped = write(
        "capped.json",
        r#"{"name": "x", "interface": {"actions": ["a"], "observations": ["o"]},
            "agent": {"builder": "constant", "dist": {"a": 1.0}},
            "environment": {"builder": "clocked", "base": {"builder": "bandit", "rewards": {"a": 0.0}},
                            "switch_time": 10, "reward_before": 0.0, "reward_after": 1.0},
            "performance": {"kind": "myopic"},
            "analysis": {"layer_cap": 3}}"#,
    );
    assert_eq!(code(&run(&["analyze", "--scenario", &capped])), 3);
}
