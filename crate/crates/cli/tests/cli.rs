use std::path::Path;
use std::process::{Command, Output};

fn qadlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qadlab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("QADLAB_OUT")
        .output()
        .expect("failed to spawn qadlab")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn qudit_sweep_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = qadlab(&["qudit-sweep", "--dims", "2,3", "--trials", "10", "--seed", "7", "--out-dir", "o"], dir.path());
    assert_ok(&out);
    let o = dir.path().join("o");
    let csv = std::fs::read_to_string(o.join("qudit_sweep_seed7_records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 20);
    assert!(csv.starts_with("d,trial,seed,purity,kappa,outcome,fidelity_standard,"));
    for name in [
        "qudit_sweep_seed7_records.json",
        "qudit_sweep_seed7_summary.json",
        "qudit_sweep_seed7_table1.csv",
        "qudit_sweep_seed7_table1.json",
    ] {
        assert!(o.join(name).is_file(), "{name} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(o.join("qudit_sweep_seed7_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["dims"].as_array().unwrap().len(), 2);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, threads) in [("a", "1"), ("b", "3")] {
        assert_ok(&qadlab(
            &["qudit-sweep", "--dims", "2,5", "--trials", "8", "--seed", "11", "--threads", threads, "--out-dir", sub],
            dir.path(),
        ));
        assert_ok(&qadlab(
            &["capacity-scan", "--dims", "2,4", "--trials", "8", "--seed", "11", "--threads", threads, "--out-dir", sub],
            dir.path(),
        ));
    }
    let mut names: Vec<_> = std::fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for n in names {
        let a = std::fs::read(dir.path().join("a").join(&n)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&n)).unwrap();
        assert!(a == b, "{n:?} differs between runs");
    }
}

#[test]
fn invalid_arguments_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["qudit-sweep", "--trials", "0"][..],
        &["qudit-sweep", "--dims", "1,2"],
        &["qudit-sweep", "--purity", "1.5"],
        &["qudit-sweep", "--threads", "0"],
        &["qudit-sweep", "--format", "xml"],
        &["qudit-sweep", "--trials", "ten"],
        &["mub-check", "--dims", "6"],
        &["adaptive-demo", "--dims", "2,3"],
        &["adaptive-demo", "--state", "thermal"],
        &["no-such-command"],
    ] {
        let out = qadlab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert!(!dir.path().join("qadlab-out").exists());
}

#[test]
fn output_directory_falls_back_to_environment_then_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qadlab"))
        .args(["mub-check", "--dims", "3"])
        .current_dir(dir.path())
        .env("QADLAB_OUT", "from-env")
        .output()
        .unwrap();
    assert_ok(&out);
    assert!(dir.path().join("from-env/mub_check.json").is_file());

    assert_ok(&qadlab(&["mub-check", "--dims", "3"], dir.path()));
    assert!(dir.path().join("qadlab-out/mub_check.json").is_file());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"seed": 3, "dims": [2], "trials": 4, "out_dir": "cfg-out", "format": "csv"}"#,
    )
    .unwrap();
    assert_ok(&qadlab(&["qudit-sweep", "--config", "cfg.json", "--seed", "5"], dir.path()));
    let o = dir.path().join("cfg-out");
    let csv = std::fs::read_to_string(o.join("qudit_sweep_seed5_records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(!o.join("qudit_sweep_seed5_records.json").exists());

    std::fs::write(dir.path().join("bad.json"), r#"{"sed": 3}"#).unwrap();
    assert_eq!(qadlab(&["qudit-sweep", "--config", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn small_commands_produce_json() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&qadlab(&["qubit-example", "--out-dir", "."], dir.path()));
    let q: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("qubit_example.json")).unwrap()).unwrap();
    assert_eq!(q["rows"].as_array().unwrap().len(), 5);

    assert_ok(&qadlab(&["sic-search", "--dims", "2", "--seed", "1", "--out-dir", "."], dir.path()));
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sic_fiducial_d2_seed1.json")).unwrap()).unwrap();
    assert!(s["fiducial"]["converged"].as_bool().unwrap());

    assert_ok(&qadlab(
        &["adaptive-demo", "--dims", "2", "--n-coarse", "500", "--restarts", "4", "--out-dir", "."],
        dir.path(),
    ));
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("adaptive_demo_d2_seed0.json")).unwrap()).unwrap();
    assert_eq!(a["pipeline"]["d"], 2);
}
