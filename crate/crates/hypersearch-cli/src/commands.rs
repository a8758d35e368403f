//! The six subcommand implementations.

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use hypersearch::eval::{
    avg_f1, feature_observation, grid_search, overlap_observation, recall_at_k,
    temporal_observation,
};
use hypersearch::ingest::{
    normalize_timestamps, parse_dataset, preprocess, split, split_from_manifest, DatasetSplit,
    SplitManifest,
};
use hypersearch::scoring::ScoreParams;
use hypersearch::search::predict;
use hypersearch::synth::{random_hypergraph, replicate_edges, SynthConfig};
use hypersearch::{Hypergraph, NodeId, Ratio, RelaxationParams};

use crate::config::RunConfig;
use crate::CliError;

const MANIFEST_FILE: &str = "manifest.json";
const PREDICTIONS_FILE: &str = "predictions.jsonl";
const BEST_PARAMS_FILE: &str = "best_params.json";

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(hypersearch::Error::from)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn load_dataset(config: &RunConfig) -> Result<Hypergraph, CliError> {
    let h = parse_dataset(config.data()?, config.format()?)?;
    Ok(preprocess(
        &h,
        config.max_edge_size(),
        config.rare_size_threshold(),
    )?)
}

/// Rebuild the preprocessed hypergraph and the persisted split.
fn load_split(out: &Path, config: &RunConfig) -> Result<(Hypergraph, DatasetSplit), CliError> {
    let manifest_path = out.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest_path).map_err(|e| {
        CliError::Config(format!(
            "cannot read {} (run `split` first): {e}",
            manifest_path.display()
        ))
    })?;
    let manifest: SplitManifest =
        serde_json::from_str(&text).map_err(hypersearch::Error::from)?;
    let h = load_dataset(config)?;
    let s = split_from_manifest(&h, &manifest)?;
    Ok((h, s))
}

fn test_sets(s: &DatasetSplit) -> Vec<Vec<NodeId>> {
    s.test.iter().map(|e| e.nodes.clone()).collect()
}

fn unique_count(sets: &[Vec<NodeId>]) -> usize {
    sets.iter()
        .map(|s| s.as_slice())
        .collect::<HashSet<_>>()
        .len()
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

pub fn cmd_split(out: &Path, config: &RunConfig) -> Result<(), CliError> {
    let h = load_dataset(config)?;
    let s = split(&h, config.mode()?, config.seed)?;
    write_json(&out.join(MANIFEST_FILE), &s.manifest)?;
    write_json(
        &out.join("split_summary.json"),
        &json!({
            "num_nodes": h.num_nodes,
            "num_edges": h.num_edges(),
            "train": s.manifest.train.len(),
            "validation": s.manifest.validation.len(),
            "test": s.manifest.test.len(),
            "discarded": s.manifest.discarded,
        }),
    )?;
    println!(
        "split: {} nodes, {} edges -> train {} / validation {} / test {} ({} discarded)",
        h.num_nodes,
        h.num_edges(),
        s.manifest.train.len(),
        s.manifest.validation.len(),
        s.manifest.test.len(),
        s.manifest.discarded.len()
    );
    Ok(())
}

pub fn cmd_observe(out: &Path, config: &RunConfig, obs: &[String]) -> Result<(), CliError> {
    let (h, s) = load_split(out, config)?;
    let tests = test_sets(&s);
    let seed = config.seed.unwrap_or(0);
    for kind in obs {
        match kind.as_str() {
            "overlap" => {
                let o = overlap_observation(&s.train, &tests, seed)?;
                let rows: Vec<Vec<String>> = o
                    .thresholds
                    .iter()
                    .zip(o.ground_truth.iter().zip(&o.null_model))
                    .map(|(t, (g, n))| vec![t.clone(), g.to_string(), n.to_string()])
                    .collect();
                write_csv(
                    &out.join("overlap.csv"),
                    &["threshold", "ground_truth", "null_model"],
                    &rows,
                )?;
                write_json(&out.join("overlap.json"), &o)?;
                println!(
                    "observe overlap: KS = {:.4}, p = {:.4}",
                    o.ks_statistic, o.ks_p_value
                );
            }
            "temporal" => {
                let o = temporal_observation(&h, 5)?;
                let rows: Vec<Vec<String>> = o
                    .gap_means
                    .iter()
                    .map(|(g, m)| vec![g.to_string(), m.to_string()])
                    .collect();
                write_csv(&out.join("temporal.csv"), &["gap", "mean_overlap"], &rows)?;
                write_json(&out.join("temporal.json"), &o)?;
                println!("observe temporal: {} gap rows", o.gap_means.len());
            }
            "feature" => {
                let o = feature_observation(&s.train, &tests, seed)?;
                write_csv(
                    &out.join("feature.csv"),
                    &["ground_truth_mean", "null_mean"],
                    &[vec![o.ground_truth_mean.to_string(), o.null_mean.to_string()]],
                )?;
                write_json(&out.join("feature.json"), &o)?;
                println!(
                    "observe feature: ground truth {:.4} vs null {:.4}",
                    o.ground_truth_mean, o.null_mean
                );
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown observation {other:?} (expected overlap, temporal, or feature)"
                )))
            }
        }
    }
    Ok(())
}

pub fn cmd_tune(out: &Path, config: &RunConfig) -> Result<(), CliError> {
    let (_, s) = load_split(out, config)?;
    let use_time = s.train.is_timestamped();
    let use_features = s.train.has_features();
    let started = Instant::now();
    let result = grid_search(&s, use_time, use_features, config.workers())?;
    let rows: Vec<Vec<String>> = result
        .evaluated
        .iter()
        .map(|(p, r)| {
            vec![
                p.relax.eps_v.to_string(),
                p.relax.eps_e.to_string(),
                p.relax.eps_t.to_string(),
                p.tau.to_string(),
                p.alpha.to_string(),
                r.to_string(),
            ]
        })
        .collect();
    write_csv(
        &out.join("grid.csv"),
        &["eps_v", "eps_e", "eps_t", "tau", "alpha", "recall_at_1x"],
        &rows,
    )?;
    write_json(&out.join(BEST_PARAMS_FILE), &result.best)?;
    println!(
        "tune: {} points in {} ms, best recall@1x = {:.4} at eps=({},{},{}), tau={}, alpha={}",
        result.evaluated.len(),
        started.elapsed().as_millis(),
        result.best_recall,
        result.best.relax.eps_v,
        result.best.relax.eps_e,
        result.best.relax.eps_t,
        result.best.tau,
        result.best.alpha
    );
    Ok(())
}

/// Parameter resolution for predict: explicit relaxation/weighting settings
/// win; otherwise a persisted tuning result; otherwise the zero relaxation.
fn resolve_params(
    out: &Path,
    config: &RunConfig,
    train: &Hypergraph,
    run_grid: bool,
    s: &DatasetSplit,
) -> Result<ScoreParams, CliError> {
    let use_time = train.is_timestamped();
    let use_features = train.has_features();
    if run_grid {
        let result = grid_search(s, use_time, use_features, config.workers())?;
        write_json(&out.join(BEST_PARAMS_FILE), &result.best)?;
        println!(
            "predict: tuned eps=({},{},{}), tau={}, alpha={} (recall@1x {:.4})",
            result.best.relax.eps_v,
            result.best.relax.eps_e,
            result.best.relax.eps_t,
            result.best.tau,
            result.best.alpha,
            result.best_recall
        );
        return Ok(result.best);
    }
    let explicit = config.eps_v.is_some()
        || config.eps_e.is_some()
        || config.eps_t.is_some()
        || config.tau.is_some()
        || config.alpha.is_some();
    if !explicit {
        let tuned = out.join(BEST_PARAMS_FILE);
        if tuned.is_file() {
            let text = std::fs::read_to_string(&tuned)?;
            let mut params: ScoreParams =
                serde_json::from_str(&text).map_err(hypersearch::Error::from)?;
            params.use_time = use_time;
            params.use_features = use_features;
            return Ok(params);
        }
    }
    Ok(ScoreParams {
        relax: RelaxationParams {
            eps_v: config.eps_v.unwrap_or(Ratio::ZERO),
            eps_e: config.eps_e.unwrap_or(Ratio::ZERO),
            eps_t: config.eps_t.unwrap_or(Ratio::ZERO),
        },
        tau: config.tau.unwrap_or(0.0),
        alpha: config.alpha.unwrap_or(0.0),
        use_time,
        use_features,
    })
}

pub fn cmd_predict(out: &Path, config: &RunConfig, tune_first: bool) -> Result<(), CliError> {
    let load_started = Instant::now();
    let (_, s) = load_split(out, config)?;
    let load_ms = load_started.elapsed().as_millis() as u64;

    let params = resolve_params(out, config, &s.train, tune_first, &s)?;
    let mut train = s.train.clone();
    if params.use_time {
        normalize_timestamps(&mut train)?;
    }
    let tests = test_sets(&s);
    if tests.is_empty() {
        return Err(hypersearch::Error::EmptyTestSet.into());
    }
    let k = round_half_up(config.k_multiplier() * unique_count(&tests) as f64).max(1);

    let search_started = Instant::now();
    let report = predict(&train, k, &params, config.prune_mode(), config.workers());
    let search_ms = search_started.elapsed().as_millis() as u64;

    let mut lines = String::new();
    for p in &report.predictions {
        lines.push_str(&serde_json::to_string(p).map_err(hypersearch::Error::from)?);
        lines.push('\n');
    }
    std::fs::write(out.join(PREDICTIONS_FILE), lines)?;
    write_json(
        &out.join("predict_meta.json"),
        &json!({
            "params": params,
            "prune_mode": config.prune_mode(),
            "workers": config.workers(),
            "k": k,
            "k_multiplier": config.k_multiplier(),
            "targets": report.targets,
            "stats": report.stats,
            "timings_ms": { "load": load_ms, "search": search_ms },
        }),
    )?;
    println!(
        "predict: {} predictions (k = {}), visited {}, pruned {}, {} ms",
        report.predictions.len(),
        k,
        report.stats.visited,
        report.stats.pruned_subtrees,
        search_ms
    );
    Ok(())
}

pub fn cmd_evaluate(out: &Path, config: &RunConfig) -> Result<(), CliError> {
    let (_, s) = load_split(out, config)?;
    let path = out.join(PREDICTIONS_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::Config(format!(
            "cannot read {} (run `predict` first): {e}",
            path.display()
        ))
    })?;
    let mut predictions: Vec<(usize, Vec<NodeId>)> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let p: hypersearch::search::Prediction =
            serde_json::from_str(line).map_err(hypersearch::Error::from)?;
        predictions.push((p.rank, p.nodes));
    }
    predictions.sort_by_key(|(rank, _)| *rank);
    let pred_sets: Vec<Vec<NodeId>> = predictions.into_iter().map(|(_, n)| n).collect();
    let tests = test_sets(&s);

    let mut recall_rows = Vec::new();
    let mut recalls = Vec::new();
    for mult in [1.0, 2.0, 5.0] {
        let r = recall_at_k(&pred_sets, &tests, mult)?;
        recall_rows.push(vec![format!("recall_at_{mult}x"), r.to_string()]);
        recalls.push((mult, r));
    }
    let f1 = avg_f1(&pred_sets, &tests)?;
    recall_rows.push(vec!["avg_f1".into(), f1.to_string()]);
    write_csv(&out.join("evaluation.csv"), &["metric", "value"], &recall_rows)?;
    write_json(
        &out.join("evaluation.json"),
        &json!({
            "recall_at": recalls,
            "avg_f1": f1,
            "num_predictions": pred_sets.len(),
            "num_test": tests.len(),
        }),
    )?;
    println!(
        "evaluate: recall@1x {:.4}, @2x {:.4}, @5x {:.4}, avg F1 {:.4}",
        recalls[0].1, recalls[1].1, recalls[2].1, f1
    );
    Ok(())
}

pub fn cmd_bench(out: &Path, config: &RunConfig, scales: u32) -> Result<(), CliError> {
    let base = random_hypergraph(
        &SynthConfig {
            num_nodes: 24,
            num_edges: 80,
            min_size: 2,
            max_size: 4,
            timestamped: false,
        },
        config.seed.unwrap_or(17),
    );
    let params = ScoreParams::structural(RelaxationParams::uniform(
        "1/5".parse()?,
    ));
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for scale in 1..=scales {
        let h = replicate_edges(&base, scale);
        let started = Instant::now();
        let report = predict(&h, 50, &params, config.prune_mode(), config.workers());
        let ms = started.elapsed().as_secs_f64() * 1000.0;
        rows.push(vec![
            scale.to_string(),
            h.num_edges().to_string(),
            format!("{ms:.3}"),
            report.stats.visited.to_string(),
        ]);
        points.push((h.num_edges() as f64, ms));
        println!(
            "bench: scale {scale}, {} edges, {:.1} ms, visited {}",
            h.num_edges(),
            ms,
            report.stats.visited
        );
    }
    let slope = log_log_slope(&points);
    write_csv(
        &out.join("bench.csv"),
        &["scale", "num_edges", "wall_ms", "visited"],
        &rows,
    )?;
    write_json(
        &out.join("bench.json"),
        &json!({ "points": points, "log_log_slope": slope }),
    )?;
    println!("bench: log-log slope {slope:.3}");
    Ok(())
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(x, _)| x.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
