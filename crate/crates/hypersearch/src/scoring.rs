//! Candidate scores: relaxed overlap-ratio sum, time weighting, and the
//! feature-similarity factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{intersection_size, Hypergraph, NodeId};
use crate::support::{max_support, RelaxationParams, SupportSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    pub relax: RelaxationParams,
    pub tau: f64,
    pub alpha: f64,
    pub use_time: bool,
    pub use_features: bool,
}

impl ScoreParams {
    pub fn structural(relax: RelaxationParams) -> Self {
        ScoreParams {
            relax,
            tau: 0.0,
            alpha: 0.0,
            use_time: false,
            use_features: false,
        }
    }
}

/// Sum of overlap ratios over the maximum support set.
pub fn score_f1(h: &Hypergraph, candidate: &[NodeId], relax: &RelaxationParams) -> f64 {
    let support = max_support(h, candidate, relax);
    support.overlap_ratios.iter().sum()
}

/// Overlap-ratio sum with exp(tau * t_e) weights on the support edges.
pub fn score_f2(
    h: &Hypergraph,
    candidate: &[NodeId],
    relax: &RelaxationParams,
    tau: f64,
) -> Result<f64> {
    let support = max_support(h, candidate, relax);
    weighted_sum(h, &support, tau)
}

fn weighted_sum(h: &Hypergraph, support: &SupportSet, tau: f64) -> Result<f64> {
    let mut total = 0.0;
    for (&j, ratio) in support.edge_indexes.iter().zip(&support.overlap_ratios) {
        let t = h.edges[j as usize]
            .timestamp
            .ok_or(Error::MissingTimestamps)?;
        total += ratio * (tau * t).exp();
    }
    Ok(total)
}

/// Mean pairwise Jaccard index of the member nodes' feature sets.
/// Jaccard(∅, ∅) is defined as 0.
pub fn feature_similarity(h: &Hypergraph, candidate: &[NodeId]) -> Result<f64> {
    if candidate.len() < 2 {
        return Err(Error::SizeTooSmall);
    }
    let features = h.features.as_ref().ok_or(Error::MissingFeatures)?;
    let mut total = 0.0;
    let mut pairs = 0usize;
    for (a, &vi) in candidate.iter().enumerate() {
        for &vj in &candidate[a + 1..] {
            total += jaccard(&features[vi as usize], &features[vj as usize]);
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

fn jaccard(a: &[u32], b: &[u32]) -> f64 {
    let inter = intersection_size(a, b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Final score: time-weighted overlap sum when enabled, multiplied by
/// (mean pairwise Jaccard)^alpha when features are enabled. Singletons get a
/// feature factor of 1 (no pairs to average).
pub fn score_final(h: &Hypergraph, candidate: &[NodeId], params: &ScoreParams) -> Result<f64> {
    let support = max_support(h, candidate, &params.relax);
    score_of_support(h, candidate, params, &support)
}

/// Score for an already-computed support set. Lets the search layer reuse the
/// solver result it got from its memo.
pub fn score_of_support(
    h: &Hypergraph,
    candidate: &[NodeId],
    params: &ScoreParams,
    support: &SupportSet,
) -> Result<f64> {
    let base = if params.use_time {
        weighted_sum(h, support, params.tau)?
    } else {
        support.overlap_ratios.iter().sum()
    };
    Ok(base * feature_factor(h, candidate, params)?)
}

pub fn feature_factor(h: &Hypergraph, candidate: &[NodeId], params: &ScoreParams) -> Result<f64> {
    if !params.use_features || candidate.len() < 2 {
        return Ok(1.0);
    }
    Ok(feature_similarity(h, candidate)?.powf(params.alpha))
}
