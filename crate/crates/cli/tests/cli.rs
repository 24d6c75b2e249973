//! End-to-end checks of the binary: output shapes, config handling,
//! determinism, and error categorization.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qanneal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qanneal"))
        .args(args)
        .current_dir(dir)
        .env_remove("QANNEAL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .collect()
}

fn header(text: &str) -> &str {
    text.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn single_tau_point_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "lz-work",
            "--delta-over-j",
            "10",
            "--tau-min",
            "0.5",
            "--tau-max",
            "0.5",
            "--tau-count",
            "1",
            "--out",
            "one.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("one.csv")).unwrap();
    assert_eq!(
        header(&text),
        "tau,J2tau_over_Delta,W_exact,W_lzf,W_apt_avg,W_apt_full,p_exact,norm_drift"
    );
    assert_eq!(data_rows(&text).len(), 1);
}

#[test]
fn half_protocol_adds_hlz_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "lz-work",
            "--delta-over-j",
            "10",
            "--protocol",
            "linear-half",
            "--tau-min",
            "1",
            "--tau-max",
            "10",
            "--tau-count",
            "3",
            "--out",
            "half.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("half.csv")).unwrap();
    assert!(header(&text).ends_with(",W_hlz"));
    assert_eq!(data_rows(&text).len(), 3);
}

#[test]
fn exact_only_chain_file_is_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "ti-work",
            "--n-spins",
            "8",
            "--curves",
            "exact",
            "--tau-min",
            "0.1",
            "--tau-max",
            "1",
            "--tau-count",
            "2",
            "--out",
            "minimal.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("minimal.csv")).unwrap();
    assert_eq!(header(&text), "tau,scaled_tau,W_exact");
    // metadata block carries the reproduction knobs
    assert!(text.contains("# n_spins = 8"));
    assert!(text.contains("# integrator = rk4"));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "ti-work",
        "--n-spins",
        "12",
        "--tau-min",
        "0.05",
        "--tau-max",
        "2",
        "--tau-count",
        "5",
    ];
    let mut full = args.to_vec();
    full.extend_from_slice(&["--out", "a.csv"]);
    assert!(qanneal(dir.path(), &full).status.success());
    let mut full = args.to_vec();
    full.extend_from_slice(&["--out", "b.csv"]);
    assert!(qanneal(dir.path(), &full).status.success());
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        r#"
model = "ti"

[params]
j = 1.0
delta = 1.0
n = 16

[tau]
min = 0.1
max = 1.0
count = 4
scaled = true

[protocol]
kind = "linear-symmetric"
"#,
    )
    .unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "ti-work",
            "--config",
            "run.toml",
            "--tau-count",
            "2",
            "--out",
            "cfg.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("cfg.csv")).unwrap();
    assert_eq!(data_rows(&text).len(), 2, "flag must override file count");
    assert!(text.contains("# n_spins = 16"));
}

#[test]
fn out_dir_env_redirects_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("redirected");
    let out = Command::new(env!("CARGO_BIN_EXE_qanneal"))
        .args([
            "lz-work",
            "--tau-min",
            "1",
            "--tau-max",
            "1",
            "--tau-count",
            "1",
            "--out",
            "env.csv",
        ])
        .current_dir(dir.path())
        .env("QANNEAL_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(target.join("env.csv").exists());
    assert!(!dir.path().join("env.csv").exists());
}

#[test]
fn phase_diagram_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "phase-diagram",
            "--n-min",
            "50",
            "--n-max",
            "100",
            "--n-count",
            "2",
            "--diag-tau-min",
            "10",
            "--diag-tau-max",
            "10000",
            "--diag-tau-count",
            "2",
            "--out",
            "pd.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("pd.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    assert_eq!(
        header(&text),
        "N,tau,scaled_tau,regime,is_boundary1,is_boundary2,reliable_flag"
    );
    assert!(dir.path().join("pd-boundary-kzm-lzf.csv").exists());
    assert!(dir.path().join("pd-boundary-lzf-apt.csv").exists());
}

#[test]
fn sweep_writes_files_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "sweep",
            "--pairs",
            "10:1,12:1",
            "--tau-min",
            "0.1",
            "--tau-max",
            "1",
            "--tau-count",
            "2",
            "--out-dir",
            "batch",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("batch/ti_N10_dj1.csv").exists());
    assert!(dir.path().join("batch/ti_N12_dj1.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("batch/manifest.json")).unwrap())
            .unwrap();
    let runs = manifest["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    assert!(runs.iter().all(|r| r["status"] == "ok"));
    assert!(runs.iter().all(|r| r["wall_time_s"].is_number()));
}

#[test]
fn empty_sweep_still_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(dir.path(), &["sweep", "--pairs", "", "--out-dir", "none"]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("none/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["runs"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_records_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    // N = 7 is odd: that run fails, the next succeeds
    let out = qanneal(
        dir.path(),
        &[
            "sweep",
            "--pairs",
            "7:1,10:1",
            "--tau-min",
            "0.5",
            "--tau-max",
            "0.5",
            "--tau-count",
            "1",
            "--out-dir",
            "mixed",
        ],
    );
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mixed/manifest.json")).unwrap())
            .unwrap();
    let runs = manifest["runs"].as_array().unwrap();
    assert_eq!(runs[0]["status"], "error");
    assert_eq!(runs[1]["status"], "ok");
    assert!(!dir.path().join("mixed/ti_N7_dj1.csv").exists());
    assert!(dir.path().join("mixed/ti_N10_dj1.csv").exists());
}

#[test]
fn crossover_reports_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &["crossover", "--model", "ti", "--n-spins", "100", "--out", "c.json"],
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    let tau1 = report["asymptotic"]["tau1_scaled"].as_f64().unwrap();
    assert!((tau1 - 0.152).abs() < 1e-3);

    let out = qanneal(
        dir.path(),
        &[
            "crossover",
            "--model",
            "ti",
            "--half",
            "--n-spins",
            "100",
            "--out",
            "h.json",
        ],
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("h.json")).unwrap()).unwrap();
    let tc = report["tau_c_scaled"].as_f64().unwrap();
    assert!((tc - 1.049).abs() < 5e-3);
}

#[test]
fn error_categories_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // config: odd chain size
    let out = qanneal(
        dir.path(),
        &["ti-work", "--n-spins", "7", "--tau-min", "1", "--tau-max", "1", "--tau-count", "1"],
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // numeric: impossible drift tolerance
    let out = qanneal(
        dir.path(),
        &[
            "lz-work",
            "--tau-min",
            "5",
            "--tau-max",
            "5",
            "--tau-count",
            "1",
            "--tau-units",
            "raw",
            "--norm-drift-tol",
            "1e-30",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    // io: missing schedule file
    let out = qanneal(
        dir.path(),
        &[
            "ti-work",
            "--n-spins",
            "8",
            "--schedule-file",
            "missing.csv",
            "--tau-min",
            "1",
            "--tau-max",
            "1",
            "--tau-count",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn aborted_run_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "lz-work",
            "--tau-min",
            "5",
            "--tau-max",
            "10",
            "--tau-count",
            "3",
            "--tau-units",
            "raw",
            "--norm-drift-tol",
            "1e-30",
            "--out",
            "aborted.csv",
        ],
    );
    assert!(!out.status.success());
    assert!(!dir.path().join("aborted.csv").exists());
    assert!(!dir.path().join("aborted.csv.tmp").exists());
}

#[test]
fn schedule_run_emits_schedule_metadata() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sched.csv"),
        "s,a,b\n0.0,2.0,0.1\n0.5,1.0,1.0\n1.0,0.1,2.0\n",
    )
    .unwrap();
    let out = qanneal(
        dir.path(),
        &[
            "ti-work",
            "--n-spins",
            "8",
            "--schedule-file",
            "sched.csv",
            "--tau-min",
            "1",
            "--tau-max",
            "10",
            "--tau-count",
            "2",
            "--tau-units",
            "raw",
            "--out",
            "sched_run.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("sched_run.csv")).unwrap();
    assert!(text.contains("# protocol = two-parameter"));
    assert!(text.contains("# schedule = "));
    assert_eq!(header(&text), "tau,scaled_tau,W_exact,W_kzm,W_lzf_mode,W_apt");
}
