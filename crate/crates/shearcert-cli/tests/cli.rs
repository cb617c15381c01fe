use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn shearcert(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearcert"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join(name)).unwrap()).unwrap()
}

#[test]
fn filters_pass_and_write_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = shearcert(dir.path(), &["filters", "1", "2", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    let r = report(dir.path(), "filters.json");
    assert_eq!(r["outcome"], "pass");
    assert_eq!(r["config"]["seed"], serde_json::json!(0x5eed_0001u64));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        shearcert(dir.path(), &["filters", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        shearcert(dir.path(), &["verify", "nothing"]).status.code(),
        Some(2)
    );
}

#[test]
fn even_denominators_need_a_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = shearcert(dir.path(), &["--c1", "1/2", "--j-max", "0", "system"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("--allow-inadmissible"));
    let o = shearcert(
        dir.path(),
        &[
            "--c1",
            "1/2",
            "--j-max",
            "0",
            "--rule",
            "contained",
            "--allow-inadmissible",
            "system",
        ],
    );
    // runs, but the system is not admissible
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(dir.path(), "system.json")["outcome"], "fail");
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"order": 1, "j_max": 0, "rule": "contained", "c1": "1/5"}"#,
    )
    .unwrap();
    let o = shearcert(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "--order", "2", "system"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let r = report(dir.path(), "system.json");
    assert_eq!(r["config"]["order"], 2);
    assert_eq!(r["config"]["c1"], "1/5");
    assert_eq!(r["config"]["j_max"], 0);

    std::fs::write(&cfg, r#"{"ordr": 1}"#).unwrap();
    let o = shearcert(dir.path(), &["--config", cfg.to_str().unwrap(), "system"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn duplicate_control_and_expect() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--j-max", "0", "--rule", "contained"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        shearcert(dir.path(), &args).status.code()
    };
    assert_eq!(run(&["gram", "--csv"]), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("gram.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(run(&["gram", "--inject-duplicate"]), Some(1));
    let r = report(dir.path(), "gram.json");
    assert_eq!(r["details"]["report"]["verdict"], "dependent");
    assert!(r["details"]["report"]["sigma_min"].as_f64().unwrap() < 1e-10);
    assert_eq!(
        run(&["--expect", "dependent", "gram", "--inject-duplicate"]),
        Some(0)
    );
    assert_eq!(
        run(&["--expect", "pass", "gram", "--inject-duplicate"]),
        Some(1)
    );
    assert_eq!(run(&["--expect", "dependent", "gram"]), Some(1));
}

#[test]
fn prop33_hypothesis_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = shearcert(dir.path(), &["verify", "prop33", "--offsets", "0,1/4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("hypothesis_failed"));
}

#[test]
fn cascade_writes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let o = shearcert(dir.path(), &["--order", "1", "cascade", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let phi = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    assert_eq!(phi.lines().count(), 1 + 9);
    assert!(dir.path().join("psi.csv").exists());
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_shearcert"))
            .env("SHEARCERT_THREADS", threads)
            .args([
                "--out",
                dir.path().to_str().unwrap(),
                "--rule",
                "contained",
                "gram",
            ])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(dir.path().join("gram.json")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}
