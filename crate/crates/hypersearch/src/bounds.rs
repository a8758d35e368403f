//! Upper bounds on the candidate score used for safe subtree pruning.
//!
//! `bound_anti_monotone` keeps only the node relaxation ratio and is an
//! anti-monotonic upper bound of the score; it is exact but expensive and is
//! used by the test suites. `bound_greedy` moves that ratio to the total
//! constraint, where the maximum support set is a prefix of the pool sorted
//! by ascending missing count, and is the production pruning bound.

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Hypergraph, NodeId};
use crate::ratio::Ratio;
use crate::scoring::{feature_factor, ScoreParams};
use crate::support::{full_pool, max_support_from_pool, RelaxationParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// The sole retained relaxation ratio; must equal the eps_v of the
    /// active score parameters.
    pub eps_v: Ratio,
    pub tau: f64,
    pub use_time: bool,
    pub alpha: f64,
    pub use_features: bool,
}

impl BoundParams {
    pub fn from_score_params(p: &ScoreParams) -> Self {
        BoundParams {
            eps_v: p.relax.eps_v,
            tau: p.tau,
            use_time: p.use_time,
            alpha: p.alpha,
            use_features: p.use_features,
        }
    }

    fn as_score_params(&self) -> ScoreParams {
        ScoreParams {
            relax: RelaxationParams {
                eps_v: self.eps_v,
                eps_e: Ratio::ONE,
                eps_t: Ratio::ONE,
            },
            tau: self.tau,
            alpha: self.alpha,
            use_time: self.use_time,
            use_features: self.use_features,
        }
    }
}

fn time_weight(h: &Hypergraph, edge_idx: u32, p: &BoundParams) -> f64 {
    if p.use_time {
        let t = h.edges[edge_idx as usize].timestamp.unwrap_or(0.0);
        (p.tau * t).exp()
    } else {
        1.0
    }
}

/// Anti-monotonic bound: sum of time weights over the exact maximum support
/// set under (eps_v, 1, 1). NP-complete to compute, kept off the hot path.
///
/// Both bounds range over the full edge universe: with eps_e = 1 an edge
/// disjoint from the candidate is admissible, and dropping such edges would
/// break anti-monotonicity under candidate extension.
pub fn bound_anti_monotone(h: &Hypergraph, candidate: &[NodeId], p: &BoundParams) -> f64 {
    let relax = RelaxationParams {
        eps_v: p.eps_v,
        eps_e: Ratio::ONE,
        eps_t: Ratio::ONE,
    };
    let pool = full_pool(h, candidate);
    let support = max_support_from_pool(h, candidate, &relax, &pool);
    support
        .edge_indexes
        .iter()
        .map(|&j| time_weight(h, j, p))
        .sum()
}

/// Edge indexes of the maximal ascending-miss prefix satisfying the total
/// constraint with ratio eps_v, i.e. the support set behind the greedy bound.
pub fn greedy_support(h: &Hypergraph, candidate: &[NodeId], eps_v: Ratio) -> Vec<u32> {
    let pool = full_pool(h, candidate);
    let cand_len = candidate.len() as u64;
    let mut best_m = 0usize;
    let mut running = 0u64;
    for (i, p) in pool.iter().enumerate() {
        running += p.missing as u64;
        // Feasible at m = i + 1 when the partial sum fits eps_v * |e'| * m.
        if eps_v.le_times(running, cand_len * (i as u64 + 1)) {
            best_m = i + 1;
        }
    }
    pool[..best_m].iter().map(|p| p.edge_idx).collect()
}

/// Production pruning bound: time-weight sum over the greedy prefix, scaled
/// by the feature factor when enabled.
pub fn bound_greedy(h: &Hypergraph, candidate: &[NodeId], p: &BoundParams) -> f64 {
    let prefix = greedy_support(h, candidate, p.eps_v);
    let base: f64 = prefix.iter().map(|&j| time_weight(h, j, p)).sum();
    if p.use_features {
        let factor = feature_factor(h, candidate, &p.as_score_params()).unwrap_or(1.0);
        base * factor
    } else {
        base
    }
}

/// `bound_greedy` without the feature factor, for the strict pruning mode
/// that keeps the full guarantee when features are in use.
pub fn bound_greedy_unweighted(h: &Hypergraph, candidate: &[NodeId], p: &BoundParams) -> f64 {
    let prefix = greedy_support(h, candidate, p.eps_v);
    prefix.iter().map(|&j| time_weight(h, j, p)).sum()
}
