use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_lanekg");

fn lanekg(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lanekg(&["train", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(lanekg(&["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().to_str().unwrap();
    let both = lanekg(&["ingest", "--run", r, "--synthetic", "--highd", r]);
    assert_eq!(both.status.code(), Some(2), "{}", stderr(&both));
    let bad_grid = lanekg(&["evaluate", "--run", r, "--horizons", "3:1:0.5"]);
    assert_eq!(bad_grid.status.code(), Some(2), "{}", stderr(&bad_grid));
}

#[test]
fn help_exits_0() {
    let o = lanekg(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("predict"));
}

#[test]
fn data_errors_exit_1_with_name() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("empty");
    let o = lanekg(&["fit-thresholds", "--run", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[IoFailure]"), "{}", stderr(&o));

    let frame = dir.path().join("bad.json");
    std::fs::write(&frame, "{not json").unwrap();
    std::fs::write(dir.path().join("thresholds.json"), "{}").unwrap();
    let o = lanekg(&[
        "predict",
        "--run",
        dir.path().to_str().unwrap(),
        "--frame",
        frame.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[MalformedInput]"), "{}", stderr(&o));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"ingest": {"n": 60, "seed": 4, "rule_params": {"vehicles_per_recording": 20}}}"#,
    )
    .unwrap();
    let r = dir.path().to_str().unwrap();
    let o = lanekg(&[
        "ingest",
        "--run",
        r,
        "--config",
        cfg.to_str().unwrap(),
        "--synthetic",
        "--n",
        "40",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let info = json(&dir.path().join("dataset.json"));
    assert_eq!(info["vehicles"], 40);
    assert_eq!(info["recordings"], 2);
    let m = json(&dir.path().join("manifest-ingest.json"));
    assert_eq!(m["command"], "ingest");
    assert_eq!(m["config"]["seed"], 4);
    assert_eq!(m["config"]["n"], 40);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_check_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().to_str().unwrap();
    let o = lanekg(&["oracle-check", "--run", r, "--corpora", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("oracle-check.json"))["passed"], true);
    assert!(dir.path().join("manifest-oracle-check.json").exists());
}

#[test]
fn small_pipeline_with_single_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"ingest": {"n": 100, "rule_params": {"vehicles_per_recording": 20}},
            "build-kg": {"valid": 100, "lane_change_stride": 20, "lane_keep_stride": 200},
            "train": {"config": {"k": 8, "batch_size": 1000, "learning_rate": 0.01, "max_epochs": 10}}}"#,
    )
    .unwrap();
    let (r, c) = (dir.path().to_str().unwrap(), cfg.to_str().unwrap());
    for step in [
        vec!["ingest", "--synthetic"],
        vec!["fit-thresholds"],
        vec!["build-kg"],
        vec!["train"],
        vec!["evaluate", "--horizons", "2.0:2.0:0.5"],
    ] {
        let mut args = step.clone();
        args.extend(["--run", r, "--config", c]);
        let o = lanekg(&args);
        assert!(o.status.success(), "{step:?}: {}", stderr(&o));
    }
    let reports = json(&dir.path().join("report-transe.json"));
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["horizon"], 2.0);
    assert!(reports[0].get("mean_latency_s").is_none());
    assert!(json(&dir.path().join("latency-transe.json")).is_array());
    let train_manifest = json(&dir.path().join("manifest-train-transe.json"));
    assert_eq!(train_manifest["config"]["config"]["k"], 8);
    assert_eq!(train_manifest["config"]["config"]["negatives_per_positive"], 5);

    let frame = dir.path().join("frame.json");
    std::fs::write(
        &frame,
        r#"{"lat_velocity": -0.9, "lat_acceleration": -0.5, "ttc_preceding": 2.0}"#,
    )
    .unwrap();
    let out = dir.path().join("pred").join("p.json");
    std::fs::create_dir_all(out.parent().unwrap()).unwrap();
    let o = lanekg(&[
        "predict",
        "--run",
        r,
        "--frame",
        frame.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let printed: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let saved = json(&out);
    assert_eq!(printed["predicted"], saved["predicted"]);
    let total: f64 = ["LLC", "LK", "RLC"]
        .iter()
        .map(|h| saved["normalized"][h].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(dir.path().join("pred").join("manifest-predict.json").exists());
}
