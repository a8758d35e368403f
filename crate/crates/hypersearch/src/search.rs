//! Size-stratified DFS over the unconstrained candidate space with
//! bound-based pruning and per-size top-k maintenance.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Hypergraph, NodeId};
use crate::ratio::Ratio;
use crate::scoring::{feature_factor, score_of_support, ScoreParams};
use crate::support::{candidate_pool, max_support_from_pool, PoolEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneMode {
    /// Prune when the (feature-weighted, if enabled) greedy bound falls
    /// below the current threshold for the candidate's own size.
    Paper,
    /// Prune only when the unweighted greedy bound falls below the minimum
    /// threshold across all sizes the subtree can still reach.
    Strict,
    /// No pruning; every candidate is scored.
    Off,
}

impl std::str::FromStr for PruneMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(PruneMode::Paper),
            "strict" => Ok(PruneMode::Strict),
            "off" => Ok(PruneMode::Off),
            other => Err(format!("unknown prune mode: {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeTargets {
    /// per_size[i] = number of predictions to emit of size i (index 0 unused).
    pub per_size: Vec<usize>,
}

impl SizeTargets {
    pub fn total(&self) -> usize {
        self.per_size.iter().sum()
    }
}

/// Per-size prediction quotas proportional to the training size
/// distribution, half-up rounded, then adjusted one slot at a time until the
/// quotas sum to k (largest/smallest fractional remainders first, ties
/// resolved toward the larger size).
pub fn size_targets(h: &Hypergraph, k: usize) -> SizeTargets {
    assert!(k >= 1);
    let total = h.num_edges() as u64;
    let mut counts = vec![0u64; h.max_size + 1];
    for e in &h.edges {
        counts[e.size()] += 1;
    }
    let mut per_size = vec![0usize; h.max_size + 1];
    // rem in units of 1/total, exact.
    let mut rems = vec![0u64; h.max_size + 1];
    for i in 1..=h.max_size {
        let num = k as u64 * counts[i];
        per_size[i] = (num / total) as usize;
        rems[i] = num % total;
        if 2 * rems[i] >= total {
            per_size[i] += 1;
        }
    }
    let mut sum: usize = per_size.iter().sum();
    while sum > k {
        // Remove from the smallest remainder among sizes holding a slot;
        // ties go to the larger size.
        let i = (1..=h.max_size)
            .filter(|&i| per_size[i] > 0)
            .min_by_key(|&i| (rems[i], i))
            .expect("sum > k implies some slot");
        per_size[i] -= 1;
        sum -= 1;
    }
    while sum < k {
        let i = (1..=h.max_size)
            .filter(|&i| counts[i] > 0)
            .max_by_key(|&i| (rems[i], i))
            .expect("non-empty hypergraph");
        per_size[i] += 1;
        sum += 1;
    }
    SizeTargets { per_size }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    score: f64,
    nodes: Vec<NodeId>,
}

/// Bounded score-ordered candidate store for one size.
#[derive(Debug)]
pub struct TopKBuffer {
    capacity: usize,
    /// Sorted ascending by (score, nodes); the eviction victim is the last
    /// entry with the minimum score (lexicographically largest candidate).
    entries: Vec<Entry>,
    has_positive: bool,
}

impl TopKBuffer {
    pub fn new(capacity: usize) -> Self {
        TopKBuffer {
            capacity,
            entries: Vec::new(),
            has_positive: false,
        }
    }

    pub fn theta(&self) -> f64 {
        if self.entries.len() < self.capacity {
            0.0
        } else {
            self.entries.first().map_or(0.0, |e| e.score)
        }
    }

    /// Insert under the Alg. 1 rule; zero-score candidates are admitted only
    /// while nothing positive has been seen, and are dropped once a positive
    /// entry arrives.
    pub fn offer(&mut self, nodes: &[NodeId], score: f64) {
        if self.capacity == 0 {
            return;
        }
        if score <= 0.0 {
            if self.has_positive || self.entries.len() >= self.capacity {
                return;
            }
        } else if !self.has_positive {
            self.entries.clear();
            self.has_positive = true;
        }
        if self.entries.len() >= self.capacity && score < self.theta() {
            return;
        }
        let entry = Entry {
            score,
            nodes: nodes.to_vec(),
        };
        let pos = self
            .entries
            .partition_point(|e| (e.score, &e.nodes) < (entry.score, &entry.nodes));
        self.entries.insert(pos, entry);
        if self.entries.len() > self.capacity {
            self.entries.remove(self.eviction_victim());
        }
    }

    fn eviction_victim(&self) -> usize {
        let min_score = self.entries[0].score;
        let mut victim = 0;
        for (i, e) in self.entries.iter().enumerate() {
            if e.score > min_score {
                break;
            }
            victim = i;
        }
        victim
    }

    /// Whether a zero-score offer could still be admitted.
    pub fn accepts_zero(&self) -> bool {
        !self.has_positive && self.entries.len() < self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prediction {
    pub size: usize,
    pub nodes: Vec<NodeId>,
    pub score: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub visited: u64,
    pub pruned_subtrees: u64,
    pub scored: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionReport {
    pub predictions: Vec<Prediction>,
    pub targets: SizeTargets,
    pub stats: SearchStats,
}

struct Shared<'a> {
    h: &'a Hypergraph,
    params: &'a ScoreParams,
    mode: PruneMode,
    targets: &'a SizeTargets,
    observed: HashSet<&'a [NodeId]>,
    buffers: Vec<Mutex<TopKBuffer>>,
    /// Monotone-published thresholds, f64 bits; stale reads only weaken
    /// pruning.
    thetas: Vec<AtomicU64>,
    /// zeros_open[i] is true while buffer i still admits zero-score entries
    /// (underfull and no positive seen). Transitions are one-way (true ->
    /// false), so a stale read only weakens pruning.
    zeros_open: Vec<AtomicBool>,
    /// Upper bound on the per-edge time weight, used for disjoint-tail edges
    /// in the greedy bound.
    max_time_weight: f64,
    i_max: usize,
    visited: AtomicU64,
    pruned: AtomicU64,
    scored: AtomicU64,
}

impl<'a> Shared<'a> {
    fn theta(&self, i: usize) -> f64 {
        f64::from_bits(self.thetas[i].load(Ordering::Relaxed))
    }

    fn publish_theta(&self, i: usize, theta: f64) {
        let bits = theta.to_bits();
        // Positive finite f64s order like their bit patterns.
        self.thetas[i].fetch_max(bits, Ordering::Relaxed);
    }

    /// Minimum threshold over sizes j >= i that still accept entries.
    /// Returns None when no such size exists (the subtree cannot contribute).
    fn min_theta_from(&self, i: usize) -> Option<f64> {
        (i..=self.i_max)
            .filter(|&j| self.targets.per_size[j] > 0)
            .map(|j| self.theta(j))
            .min_by(f64::total_cmp)
    }

    /// Whether any buffer reachable from size i still admits zero scores.
    fn zeros_accepted_from(&self, i: usize) -> bool {
        (i..=self.i_max).any(|j| self.zeros_open[j].load(Ordering::Relaxed))
    }
}

/// Greedy bound over the full edge universe, evaluated as the intersecting
/// pool (sorted by ascending miss count) plus a tail of `disjoint` edges that
/// each miss every candidate node. The tail keeps the bound valid for every
/// superset reachable from the candidate: a support edge of a superset may be
/// disjoint from the candidate itself.
#[allow(clippy::too_many_arguments)]
fn bound_from_pool(
    h: &Hypergraph,
    candidate: &[NodeId],
    pool: &[PoolEdge],
    disjoint: usize,
    tail_weight: f64,
    eps_v: Ratio,
    params: &ScoreParams,
    weighted: bool,
) -> f64 {
    let cand_len = candidate.len() as u64;
    let mut m = 0u64;
    let mut running_miss = 0u64;
    let mut running_weight = 0.0f64;
    let mut best = 0.0f64;
    for p in pool {
        m += 1;
        running_miss += p.missing as u64;
        running_weight += if params.use_time {
            let t = h.edges[p.edge_idx as usize].timestamp.unwrap_or(0.0);
            (params.tau * t).exp()
        } else {
            1.0
        };
        if eps_v.le_times(running_miss, cand_len * m) {
            best = running_weight;
        }
    }
    // Tail edges all have the same miss count, so feasibility is monotone in
    // the number taken and the first failure ends the prefix.
    for _ in 0..disjoint {
        m += 1;
        running_miss += cand_len;
        running_weight += tail_weight;
        if eps_v.le_times(running_miss, cand_len * m) {
            best = running_weight;
        } else {
            break;
        }
    }
    if weighted && params.use_features {
        best * feature_factor(h, candidate, params).unwrap_or(1.0)
    } else {
        best
    }
}

fn dfs_root(shared: &Shared<'_>, root: NodeId) {
    let h = shared.h;
    let params = shared.params;
    let mut stack: Vec<Vec<NodeId>> = vec![vec![root]];
    while let Some(cand) = stack.pop() {
        shared.visited.fetch_add(1, Ordering::Relaxed);
        let i = cand.len();
        // Intersecting pool, shared between the bound and the scorer; the
        // remaining edges form the bound's disjoint tail.
        let pool = candidate_pool(h, &cand, Ratio::ONE);
        let disjoint = h.num_edges() - pool.len();
        let prune = match shared.mode {
            PruneMode::Off => false,
            mode => {
                let bound_plain = bound_from_pool(
                    h,
                    &cand,
                    &pool,
                    disjoint,
                    shared.max_time_weight,
                    params.relax.eps_v,
                    params,
                    false,
                );
                // The bound caps the score of every candidate in the subtree,
                // so a zero-bound subtree is useful only while some reachable
                // buffer still admits zero scores.
                if bound_plain <= 0.0 && !shared.zeros_accepted_from(i) {
                    true
                } else {
                    match mode {
                        PruneMode::Paper => {
                            if shared.targets.per_size[i] > 0 {
                                let bound = if params.use_features {
                                    bound_from_pool(
                                        h,
                                        &cand,
                                        &pool,
                                        disjoint,
                                        shared.max_time_weight,
                                        params.relax.eps_v,
                                        params,
                                        true,
                                    )
                                } else {
                                    bound_plain
                                };
                                bound < shared.theta(i)
                            } else {
                                false
                            }
                        }
                        PruneMode::Strict => match shared.min_theta_from(i) {
                            None => true,
                            Some(theta_min) => bound_plain < theta_min,
                        },
                        PruneMode::Off => unreachable!(),
                    }
                }
            }
        };
        if prune {
            shared.pruned.fetch_add(1, Ordering::Relaxed);
            continue;
        }
        if shared.targets.per_size[i] > 0 {
            let score_pool: Vec<PoolEdge> = pool
                .iter()
                .filter(|p| {
                    params
                        .relax
                        .eps_e
                        .le_times(p.missing as u64, cand.len() as u64)
                })
                .copied()
                .collect();
            let support = max_support_from_pool(h, &cand, &params.relax, &score_pool);
            let score = score_of_support(h, &cand, params, &support)
                .expect("score preconditions checked before search");
            shared.scored.fetch_add(1, Ordering::Relaxed);
            if !shared.observed.contains(cand.as_slice()) {
                let mut buf = shared.buffers[i].lock().unwrap();
                buf.offer(&cand, score);
                let theta = buf.theta();
                let accepts_zero = buf.accepts_zero();
                drop(buf);
                shared.publish_theta(i, theta);
                if !accepts_zero {
                    shared.zeros_open[i].store(false, Ordering::Relaxed);
                }
            }
        }
        if i < shared.i_max {
            let start = cand.last().copied().unwrap() + 1;
            for w in start..h.num_nodes {
                let mut next = cand.clone();
                next.push(w);
                stack.push(next);
            }
        }
    }
}

/// Run the size-stratified search and return the merged per-size top-k
/// predictions ordered by (size, descending score).
pub fn predict(
    h: &Hypergraph,
    k: usize,
    params: &ScoreParams,
    mode: PruneMode,
    workers: usize,
) -> PredictionReport {
    assert!(k >= 1 && h.num_edges() > 0);
    let targets = size_targets(h, k);
    let i_max = h.max_size;
    let shared = Shared {
        h,
        params,
        mode,
        targets: &targets,
        observed: h.edges.iter().map(|e| e.nodes.as_slice()).collect(),
        buffers: targets
            .per_size
            .iter()
            .map(|&c| Mutex::new(TopKBuffer::new(c)))
            .collect(),
        thetas: (0..=i_max).map(|_| AtomicU64::new(0)).collect(),
        zeros_open: targets
            .per_size
            .iter()
            .map(|&c| AtomicBool::new(c > 0))
            .collect(),
        max_time_weight: if params.use_time {
            h.edges
                .iter()
                .map(|e| (params.tau * e.timestamp.unwrap_or(0.0)).exp())
                .fold(1.0f64, f64::max)
        } else {
            1.0
        },
        i_max,
        visited: AtomicU64::new(0),
        pruned: AtomicU64::new(0),
        scored: AtomicU64::new(0),
    };

    run_roots(h.num_nodes, workers, &|v| dfs_root(&shared, v));

    let mut predictions = Vec::new();
    for i in 1..=i_max {
        let buf = shared.buffers[i].lock().unwrap();
        let mut entries: Vec<Entry> = buf.entries.clone();
        // Descending score, then ascending node sequence.
        entries.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.nodes.cmp(&b.nodes))
        });
        for e in entries {
            predictions.push(Prediction {
                size: i,
                nodes: e.nodes,
                score: e.score,
                rank: 0,
            });
        }
    }
    for (r, p) in predictions.iter_mut().enumerate() {
        p.rank = r + 1;
    }
    let stats = SearchStats {
        visited: shared.visited.load(Ordering::Relaxed),
        pruned_subtrees: shared.pruned.load(Ordering::Relaxed),
        scored: shared.scored.load(Ordering::Relaxed),
    };
    drop(shared);
    PredictionReport {
        predictions,
        targets,
        stats,
    }
}

#[cfg(feature = "parallel")]
fn run_roots(num_nodes: u32, workers: usize, f: &(dyn Fn(u32) + Sync)) {
    if workers <= 1 {
        for v in 0..num_nodes {
            f(v);
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            (0..num_nodes).into_par_iter().for_each(f);
        });
    }
}

#[cfg(not(feature = "parallel"))]
fn run_roots(num_nodes: u32, _workers: usize, f: &(dyn Fn(u32) + Sync)) {
    for v in 0..num_nodes {
        f(v);
    }
}
