//! End-to-end runs of the `hypersearch` binary against small temp datasets.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypersearch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// 30 unique timestamped edges over 8 nodes (all 28 pairs plus 2 triples),
/// so every split keeps a non-empty test partition.
fn write_dataset(dir: &Path) -> String {
    let mut text = String::new();
    let mut t = 0;
    for a in 0..8u32 {
        for b in a + 1..8 {
            text.push_str(&format!("{a} {b} t={t}\n"));
            t += 1;
        }
    }
    text.push_str(&format!("0 1 2 t={t}\n"));
    text.push_str(&format!("3 4 5 t={}\n", t + 1));
    let path = dir.join("data.txt");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn split_writes_manifest_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    for out in [&out_a, &out_b] {
        let o = run(&[
            "split",
            "--data",
            &data,
            "--format",
            "edge-list",
            "--mode",
            "random",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_ok(&o);
    }
    let ma = read(&out_a, "manifest.json");
    assert_eq!(ma, read(&out_b, "manifest.json"));
    let manifest: serde_json::Value = serde_json::from_str(&ma).unwrap();
    assert_eq!(manifest["mode"], "random");
    assert!(out_a.join("run_config.json").exists());
    assert!(out_a.join("split_summary.json").exists());
}

#[test]
fn chronological_split_on_untimed_dataset_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("untimed.txt");
    std::fs::write(&data, "0 1\n1 2\n2 3\n0 2\n1 3\n").unwrap();
    let o = run(&[
        "split",
        "--data",
        data.to_str().unwrap(),
        "--format",
        "edge-list",
        "--mode",
        "chronological",
        "--out",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_dataset_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&[
        "split",
        "--data",
        "/nonexistent/file.txt",
        "--format",
        "edge-list",
        "--mode",
        "random",
        "--out",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn predict_without_split_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let o = run(&[
        "predict",
        "--data",
        &data,
        "--format",
        "edge-list",
        "--out",
        tmp.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn full_pipeline_runs_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap().to_string();
    assert_ok(&run(&[
        "split", "--data", &data, "--format", "edge-list", "--mode", "chronological", "--out",
        &out_s,
    ]));

    // Flags recorded by split flow into later commands via run_config.json:
    // no --data/--format needed from here on.
    let predict_args = [
        "predict",
        "--eps-v",
        "1/4",
        "--eps-e",
        "1/4",
        "--eps-t",
        "1/4",
        "--prune-mode",
        "strict",
        "--workers",
        "1",
        "--out",
        &out_s,
    ];
    assert_ok(&run(&predict_args));
    let first = read(&out, "predictions.jsonl");
    assert_ok(&run(&predict_args));
    assert_eq!(first, read(&out, "predictions.jsonl"), "determinism");
    assert!(!first.trim().is_empty());
    for line in first.lines() {
        let p: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(p["rank"].as_u64().unwrap() >= 1);
        assert!(!p["nodes"].as_array().unwrap().is_empty());
    }
    let meta: serde_json::Value =
        serde_json::from_str(&read(&out, "predict_meta.json")).unwrap();
    assert!(meta["stats"]["visited"].as_u64().unwrap() > 0);
    assert_eq!(meta["params"]["relax"]["eps_v"], "1/4");

    assert_ok(&run(&["evaluate", "--out", &out_s]));
    let eval: serde_json::Value = serde_json::from_str(&read(&out, "evaluation.json")).unwrap();
    let r1 = eval["recall_at"][0][1].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&r1));
    assert!(eval["avg_f1"].as_f64().unwrap() >= 0.0);
    let csv = read(&out, "evaluation.csv");
    assert!(csv.starts_with("metric,value\n"));
    assert!(csv.contains("avg_f1"));
}

#[test]
fn observe_emits_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap().to_string();
    assert_ok(&run(&[
        "split", "--data", &data, "--format", "edge-list", "--mode", "chronological", "--out",
        &out_s,
    ]));
    assert_ok(&run(&[
        "observe", "--obs", "overlap", "--obs", "temporal", "--seed", "3", "--out", &out_s,
    ]));
    let overlap = read(&out, "overlap.csv");
    assert!(overlap.starts_with("threshold,ground_truth,null_model\n"));
    assert_eq!(overlap.lines().count(), 5); // header + 4 thresholds
    let temporal = read(&out, "temporal.csv");
    assert!(temporal.starts_with("gap,mean_overlap\n"));

    // Feature observation without features is a precondition error.
    let o = run(&["observe", "--obs", "feature", "--out", &out_s]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tune_then_predict_uses_best_params() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap().to_string();
    assert_ok(&run(&[
        "split", "--data", &data, "--format", "edge-list", "--mode", "random", "--seed", "1",
        "--out", &out_s,
    ]));
    assert_ok(&run(&["tune", "--workers", "1", "--out", &out_s]));
    let grid = read(&out, "grid.csv");
    // 28 relaxation points x 4 tau values (timestamped, featureless).
    assert_eq!(grid.lines().count(), 1 + 28 * 4);
    let best: serde_json::Value = serde_json::from_str(&read(&out, "best_params.json")).unwrap();
    assert!(best["relax"]["eps_v"].is_string());

    assert_ok(&run(&["predict", "--workers", "1", "--out", &out_s]));
    let meta: serde_json::Value =
        serde_json::from_str(&read(&out, "predict_meta.json")).unwrap();
    assert_eq!(meta["params"]["relax"]["eps_v"], best["relax"]["eps_v"]);
}

#[test]
fn bench_reports_slope() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap().to_string();
    assert_ok(&run(&["bench", "--scales", "2", "--workers", "1", "--out", &out_s]));
    let bench: serde_json::Value = serde_json::from_str(&read(&out, "bench.json")).unwrap();
    assert!(bench["log_log_slope"].is_number());
    assert!(read(&out, "bench.csv").starts_with("scale,num_edges,wall_ms,visited\n"));
}

#[test]
fn config_file_layer_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out = tmp.path().join("out");
    let out_s = out.to_str().unwrap().to_string();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(r#"{{ "data": "{data}", "format": "edge-list", "mode": "random", "seed": 5 }}"#),
    )
    .unwrap();
    // Flag --seed 9 must beat the file's seed 5.
    assert_ok(&run(&[
        "split",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        &out_s,
    ]));
    let resolved: serde_json::Value =
        serde_json::from_str(&read(&out, "run_config.json")).unwrap();
    assert_eq!(resolved["seed"], 9);
    assert_eq!(resolved["mode"], "random");
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 9);
}
