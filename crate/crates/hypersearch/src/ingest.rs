//! Dataset parsing, preprocessing, and train/validation/test splitting.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetFormat {
    /// `<name>-nverts.txt`, `<name>-simplices.txt`, `<name>-times.txt`:
    /// per-edge vertex counts, flattened vertex stream, per-edge timestamps.
    Benson3File,
    /// One edge per line, whitespace-separated node tokens, optional
    /// trailing `t=<int>`.
    EdgeList,
}

impl std::str::FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "benson-3file" | "benson" => Ok(DatasetFormat::Benson3File),
            "edge-list" | "edgelist" => Ok(DatasetFormat::EdgeList),
            other => Err(format!("unknown dataset format: {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    Chronological,
    Random,
}

impl std::str::FromStr for SplitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "chronological" | "chrono" => Ok(SplitMode::Chronological),
            "random" => Ok(SplitMode::Random),
            other => Err(format!("unknown split mode: {other}")),
        }
    }
}

/// Why an edge was dropped from the test partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    DuplicateOfTraining,
    UnseenNode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitManifest {
    pub mode: SplitMode,
    pub seed: Option<u64>,
    /// Edge indexes into the preprocessed edge list, per partition.
    pub train: Vec<u32>,
    pub validation: Vec<u32>,
    pub test: Vec<u32>,
    pub discarded: Vec<(u32, DiscardReason)>,
}

#[derive(Debug, Clone)]
pub struct DatasetSplit {
    /// E1 minus validation, as a hypergraph over the full node universe.
    pub train: Hypergraph,
    pub validation: Vec<Hyperedge>,
    pub test: Vec<Hyperedge>,
    pub manifest: SplitManifest,
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(str::to_string)
        .collect())
}

fn parse_int<T: std::str::FromStr>(tok: &str, file: &Path, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::ParseError {
        file: file.display().to_string(),
        line,
        msg: format!("invalid integer token {tok:?}"),
    })
}

/// Parse a dataset at `path`. For the three-file format, `path` is the
/// common prefix (`<prefix>-nverts.txt` etc.); for the edge-list format it
/// is the file itself. A `<prefix>.features` or sibling `features.txt`
/// sidecar, when present, supplies per-node token-id sets.
pub fn parse_dataset(path: &Path, format: DatasetFormat) -> Result<Hypergraph> {
    let raw_edges = match format {
        DatasetFormat::Benson3File => parse_benson(path)?,
        DatasetFormat::EdgeList => parse_edge_list(path)?,
    };
    // Remap raw node ids densely in order of first appearance.
    let mut remap: HashMap<u64, NodeId> = HashMap::new();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (raw_nodes, ts) in raw_edges {
        let nodes: Vec<NodeId> = raw_nodes
            .iter()
            .map(|&r| {
                let next = remap.len() as NodeId;
                *remap.entry(r).or_insert(next)
            })
            .collect();
        let mut e = Hyperedge::new(nodes);
        e.raw_timestamp = ts;
        edges.push(e);
    }
    let num_nodes = remap.len() as u32;
    let mut h = Hypergraph::build(edges, num_nodes)?;
    if let Some(feat_path) = feature_sidecar(path) {
        h.features = Some(parse_features(&feat_path, num_nodes, &remap)?);
    }
    Ok(h)
}

fn feature_sidecar(path: &Path) -> Option<PathBuf> {
    let with_ext = path.with_extension("features");
    if with_ext.is_file() {
        return Some(with_ext);
    }
    let mut s = path.as_os_str().to_owned();
    s.push("-features.txt");
    let dashed = PathBuf::from(s);
    dashed.is_file().then_some(dashed)
}

type RawEdge = (Vec<u64>, Option<i64>);

fn parse_benson(prefix: &Path) -> Result<Vec<RawEdge>> {
    let file_for = |suffix: &str| -> PathBuf {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let nverts_path = file_for("-nverts.txt");
    let simplices_path = file_for("-simplices.txt");
    let times_path = file_for("-times.txt");

    let mut nverts = Vec::new();
    for (i, line) in read_lines(&nverts_path)?.iter().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        nverts.push(parse_int::<usize>(line, &nverts_path, i + 1)?);
    }
    let mut stream = Vec::new();
    for (i, line) in read_lines(&simplices_path)?.iter().enumerate() {
        for tok in line.split_whitespace() {
            stream.push(parse_int::<u64>(tok, &simplices_path, i + 1)?);
        }
    }
    let total: usize = nverts.iter().sum();
    if total != stream.len() {
        return Err(Error::InconsistentCounts(format!(
            "nverts total {total} != simplices stream length {}",
            stream.len()
        )));
    }
    let times: Option<Vec<i64>> = if times_path.is_file() {
        let mut ts = Vec::new();
        for (i, line) in read_lines(&times_path)?.iter().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            ts.push(parse_int::<i64>(line, &times_path, i + 1)?);
        }
        if ts.len() != nverts.len() {
            return Err(Error::InconsistentCounts(format!(
                "times count {} != edge count {}",
                ts.len(),
                nverts.len()
            )));
        }
        Some(ts)
    } else {
        None
    };

    let mut edges = Vec::with_capacity(nverts.len());
    let mut offset = 0;
    for (j, &nv) in nverts.iter().enumerate() {
        let nodes = stream[offset..offset + nv].to_vec();
        offset += nv;
        edges.push((nodes, times.as_ref().map(|t| t[j])));
    }
    Ok(edges)
}

fn parse_edge_list(path: &Path) -> Result<Vec<RawEdge>> {
    let mut edges = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut nodes = Vec::new();
        let mut ts = None;
        for tok in line.split_whitespace() {
            if let Some(t) = tok.strip_prefix("t=") {
                ts = Some(parse_int::<i64>(t, path, i + 1)?);
            } else {
                nodes.push(parse_int::<u64>(tok, path, i + 1)?);
            }
        }
        if nodes.is_empty() {
            return Err(Error::ParseError {
                file: path.display().to_string(),
                line: i + 1,
                msg: "edge line with no nodes".into(),
            });
        }
        edges.push((nodes, ts));
    }
    Ok(edges)
}

fn parse_features(
    path: &Path,
    num_nodes: u32,
    remap: &HashMap<u64, NodeId>,
) -> Result<Vec<Vec<u32>>> {
    // One line per raw node id (line number = raw id); token ids per line.
    let mut features = vec![Vec::new(); num_nodes as usize];
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let Some(&dense) = remap.get(&(i as u64)) else {
            continue; // node never appears in an edge
        };
        let mut toks = Vec::new();
        for tok in line.split_whitespace() {
            toks.push(parse_int::<u32>(tok, path, i + 1)?);
        }
        toks.sort_unstable();
        toks.dedup();
        features[dense as usize] = toks;
    }
    Ok(features)
}

/// Drop oversized edges, then rare sizes, then re-densify node ids.
pub fn preprocess(h: &Hypergraph, max_edge_size: usize, rare_size_threshold: f64) -> Result<Hypergraph> {
    let kept: Vec<&Hyperedge> = h.edges.iter().filter(|e| e.size() <= max_edge_size).collect();
    let mut size_counts: HashMap<usize, usize> = HashMap::new();
    for e in &kept {
        *size_counts.entry(e.size()).or_insert(0) += 1;
    }
    let total = kept.len();
    let kept: Vec<&Hyperedge> = kept
        .into_iter()
        .filter(|e| size_counts[&e.size()] as f64 >= rare_size_threshold * total as f64)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyResult);
    }
    // Re-densify in order of first appearance.
    let mut remap: HashMap<NodeId, NodeId> = HashMap::new();
    let mut edges = Vec::with_capacity(kept.len());
    for e in &kept {
        let nodes: Vec<NodeId> = e
            .nodes
            .iter()
            .map(|&v| {
                let next = remap.len() as NodeId;
                *remap.entry(v).or_insert(next)
            })
            .collect();
        let mut ne = Hyperedge::new(nodes);
        ne.raw_timestamp = e.raw_timestamp;
        ne.timestamp = e.timestamp;
        edges.push(ne);
    }
    let num_nodes = remap.len() as u32;
    let mut out = Hypergraph::build(edges, num_nodes)?;
    if let Some(old_features) = &h.features {
        let mut features = vec![Vec::new(); num_nodes as usize];
        for (&old, &new) in &remap {
            features[new as usize] = old_features[old as usize].clone();
        }
        out.features = Some(features);
    }
    Ok(out)
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// 80/20 train/test split with a 20%-of-train validation carve-out.
/// Chronological mode sorts by raw timestamp with input order breaking ties;
/// random mode permutes with the given seed. Test edges duplicating a
/// training node set or containing unseen nodes are discarded (and logged).
pub fn split(h: &Hypergraph, mode: SplitMode, seed: Option<u64>) -> Result<DatasetSplit> {
    let n = h.num_edges();
    let mut order: Vec<u32> = (0..n as u32).collect();
    match mode {
        SplitMode::Chronological => {
            if !h.is_timestamped() {
                return Err(Error::MissingTimestamps);
            }
            order.sort_by_key(|&j| h.edges[j as usize].raw_timestamp.unwrap());
        }
        SplitMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            order.shuffle(&mut rng);
        }
    }
    let n_test = round_half_up(0.2 * n as f64).min(n.saturating_sub(1));
    let n_observed = n - n_test;
    let observed = &order[..n_observed];
    let test_candidates = &order[n_observed..];
    // Validation: the most recent (or last in the shuffled order) 20% of
    // the observed edges.
    let n_val = round_half_up(0.2 * n_observed as f64).min(n_observed.saturating_sub(1));
    let train_idx: Vec<u32> = observed[..n_observed - n_val].to_vec();
    let val_idx: Vec<u32> = observed[n_observed - n_val..].to_vec();

    let train_sets: HashSet<&[NodeId]> = train_idx
        .iter()
        .chain(&val_idx)
        .map(|&j| h.edges[j as usize].nodes.as_slice())
        .collect();
    let train_nodes: HashSet<NodeId> = train_idx
        .iter()
        .flat_map(|&j| h.edges[j as usize].nodes.iter().copied())
        .collect();

    let mut test_idx = Vec::new();
    let mut discarded = Vec::new();
    for &j in test_candidates {
        let e = &h.edges[j as usize];
        if train_sets.contains(e.nodes.as_slice()) {
            discarded.push((j, DiscardReason::DuplicateOfTraining));
        } else if e.nodes.iter().any(|v| !train_nodes.contains(v)) {
            discarded.push((j, DiscardReason::UnseenNode));
        } else {
            test_idx.push(j);
        }
    }

    let train_edges: Vec<Hyperedge> = train_idx
        .iter()
        .map(|&j| h.edges[j as usize].clone())
        .collect();
    let mut train = Hypergraph::build(train_edges, h.num_nodes)?;
    train.features = h.features.clone();

    Ok(DatasetSplit {
        train,
        validation: val_idx.iter().map(|&j| h.edges[j as usize].clone()).collect(),
        test: test_idx.iter().map(|&j| h.edges[j as usize].clone()).collect(),
        manifest: SplitManifest {
            mode,
            seed,
            train: train_idx,
            validation: val_idx,
            test: test_idx,
            discarded,
        },
    })
}

/// Rebuild a split from a persisted manifest against the same preprocessed
/// hypergraph, without re-running the partitioning.
pub fn split_from_manifest(h: &Hypergraph, manifest: &SplitManifest) -> Result<DatasetSplit> {
    let n = h.num_edges() as u32;
    let in_range = |idxs: &[u32]| idxs.iter().all(|&j| j < n);
    if !in_range(&manifest.train)
        || !in_range(&manifest.validation)
        || !in_range(&manifest.test)
    {
        return Err(Error::InconsistentCounts(format!(
            "manifest references edges beyond the {n} preprocessed edges"
        )));
    }
    let train_edges: Vec<Hyperedge> = manifest
        .train
        .iter()
        .map(|&j| h.edges[j as usize].clone())
        .collect();
    let mut train = Hypergraph::build(train_edges, h.num_nodes)?;
    train.features = h.features.clone();
    Ok(DatasetSplit {
        train,
        validation: manifest
            .validation
            .iter()
            .map(|&j| h.edges[j as usize].clone())
            .collect(),
        test: manifest
            .test
            .iter()
            .map(|&j| h.edges[j as usize].clone())
            .collect(),
        manifest: manifest.clone(),
    })
}

/// Min-max normalize timestamps over this hypergraph's own edges (the
/// training window). A degenerate range maps every timestamp to 1 so the
/// exp(tau * t) weighting stays active.
pub fn normalize_timestamps(h: &mut Hypergraph) -> Result<()> {
    if !h.is_timestamped() {
        return Err(Error::MissingTimestamps);
    }
    let min = h.edges.iter().map(|e| e.raw_timestamp.unwrap()).min().unwrap();
    let max = h.edges.iter().map(|e| e.raw_timestamp.unwrap()).max().unwrap();
    for e in &mut h.edges {
        let raw = e.raw_timestamp.unwrap();
        e.timestamp = Some(if max == min {
            1.0
        } else {
            (raw - min) as f64 / (max - min) as f64
        });
    }
    Ok(())
}
