//! Maximum support set computation: the largest subset of observed
//! hyperedges that jointly satisfies the node / hyperedge / total miss-budget
//! constraints for a candidate.

use serde::{Deserialize, Serialize};

use crate::hypergraph::{Hypergraph, NodeId};
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelaxationParams {
    pub eps_v: Ratio,
    pub eps_e: Ratio,
    pub eps_t: Ratio,
}

impl RelaxationParams {
    pub fn zero() -> Self {
        RelaxationParams {
            eps_v: Ratio::ZERO,
            eps_e: Ratio::ZERO,
            eps_t: Ratio::ZERO,
        }
    }

    pub fn uniform(r: Ratio) -> Self {
        RelaxationParams {
            eps_v: r,
            eps_e: r,
            eps_t: r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    /// Observed-edge indexes forming the support set, ascending.
    pub edge_indexes: Vec<u32>,
    /// |candidate ∩ e| / |e| per included edge, parallel to `edge_indexes`.
    pub overlap_ratios: Vec<f64>,
}

impl SupportSet {
    pub fn empty() -> Self {
        SupportSet {
            edge_indexes: Vec::new(),
            overlap_ratios: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.edge_indexes.len()
    }
}

/// Pool entry: an observed edge intersecting the candidate, with its miss
/// statistics relative to the candidate.
#[derive(Debug, Clone, Copy)]
pub struct PoolEdge {
    pub edge_idx: u32,
    pub missing: u32,
    pub intersect: u32,
    /// Bit i set when candidate[i] is absent from the edge. Candidate sizes
    /// are capped well below 64 by preprocessing.
    pub miss_mask: u64,
}

/// Observed edges with nonzero intersection and per-edge missing count within
/// the eps_e budget, gathered via the incidence index.
pub fn candidate_pool(h: &Hypergraph, candidate: &[NodeId], eps_e: Ratio) -> Vec<PoolEdge> {
    assert!(!candidate.is_empty());
    assert!(candidate.len() <= 64, "candidate too large for miss masks");
    let mut counts: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for &v in candidate {
        for &j in &h.incidence[v as usize] {
            *counts.entry(j).or_insert(0) += 1;
        }
    }
    let cand_len = candidate.len() as u64;
    let mut pool: Vec<PoolEdge> = counts
        .into_iter()
        .filter_map(|(j, intersect)| {
            let missing = candidate.len() as u32 - intersect;
            if !eps_e.le_times(missing as u64, cand_len) {
                return None;
            }
            let mut miss_mask = 0u64;
            if missing > 0 {
                let nodes = &h.edges[j as usize].nodes;
                for (i, &v) in candidate.iter().enumerate() {
                    if nodes.binary_search(&v).is_err() {
                        miss_mask |= 1 << i;
                    }
                }
            }
            Some(PoolEdge {
                edge_idx: j,
                missing,
                intersect,
                miss_mask,
            })
        })
        .collect();
    pool.sort_unstable_by_key(|p| (p.missing, p.edge_idx));
    pool
}

/// Pool over the full edge universe: every observed edge, including those
/// disjoint from the candidate. Used by the bounds, whose ε_e = 1 admits
/// arbitrary per-edge misses.
pub fn full_pool(h: &Hypergraph, candidate: &[NodeId]) -> Vec<PoolEdge> {
    assert!(!candidate.is_empty());
    assert!(candidate.len() <= 64, "candidate too large for miss masks");
    let mut pool: Vec<PoolEdge> = (0..h.num_edges() as u32)
        .map(|j| {
            let nodes = &h.edges[j as usize].nodes;
            let mut miss_mask = 0u64;
            for (i, &v) in candidate.iter().enumerate() {
                if nodes.binary_search(&v).is_err() {
                    miss_mask |= 1 << i;
                }
            }
            let missing = miss_mask.count_ones();
            PoolEdge {
                edge_idx: j,
                missing,
                intersect: candidate.len() as u32 - missing,
                miss_mask,
            }
        })
        .collect();
    pool.sort_unstable_by_key(|p| (p.missing, p.edge_idx));
    pool
}

/// Exact maximum support set for `candidate` under the three relaxation
/// constraints. Decided by iterating the target cardinality m downward and
/// testing feasibility with branch-and-bound over the pool, so the coupled
/// right-hand sides (eps * m) become fixed integer budgets per m.
pub fn max_support(h: &Hypergraph, candidate: &[NodeId], params: &RelaxationParams) -> SupportSet {
    let pool = candidate_pool(h, candidate, params.eps_e);
    max_support_from_pool(h, candidate, params, &pool)
}

pub fn max_support_from_pool(
    h: &Hypergraph,
    candidate: &[NodeId],
    params: &RelaxationParams,
    pool: &[PoolEdge],
) -> SupportSet {
    if pool.is_empty() {
        return SupportSet::empty();
    }
    let cand_len = candidate.len() as u64;
    // prefix_miss[m] = sum of the m smallest per-edge misses.
    let mut prefix_miss = vec![0u64; pool.len() + 1];
    for (i, p) in pool.iter().enumerate() {
        prefix_miss[i + 1] = prefix_miss[i] + p.missing as u64;
    }
    for m in (1..=pool.len()).rev() {
        let node_budget = params.eps_v.floor_times(m as u64);
        let total_budget = params.eps_t.floor_times(cand_len * m as u64);
        if prefix_miss[m] > total_budget {
            // Even the m cheapest edges blow the total budget.
            continue;
        }
        let mut chosen = Vec::with_capacity(m);
        if search_exact(
            pool,
            &prefix_miss,
            m,
            node_budget,
            total_budget,
            candidate.len(),
            0,
            0,
            &mut vec![0u32; candidate.len()],
            &mut chosen,
        ) {
            let mut edge_indexes: Vec<u32> = chosen.iter().map(|&i| pool[i].edge_idx).collect();
            edge_indexes.sort_unstable();
            let overlap_ratios = edge_indexes
                .iter()
                .map(|&j| {
                    h.intersect_count(candidate, j) as f64 / h.edges[j as usize].size() as f64
                })
                .collect();
            return SupportSet {
                edge_indexes,
                overlap_ratios,
            };
        }
    }
    SupportSet::empty()
}

/// Branch-and-bound feasibility check for a support set of exactly `m` edges.
/// Pool is sorted by ascending missing count, so the cheapest completion of a
/// partial choice is always the next (m - chosen) edges.
// Index loops walk bit positions of miss_mask alongside node_miss.
#[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
fn search_exact(
    pool: &[PoolEdge],
    prefix_miss: &[u64],
    m: usize,
    node_budget: u64,
    total_budget: u64,
    cand_len: usize,
    pos: usize,
    total_miss: u64,
    node_miss: &mut Vec<u32>,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == m {
        return true;
    }
    let need = m - chosen.len();
    if pool.len() - pos < need {
        return false;
    }
    // Optimistic completion: the `need` cheapest remaining misses.
    let cheapest_rest = prefix_miss[pos + need] - prefix_miss[pos];
    if total_miss + cheapest_rest > total_budget {
        return false;
    }
    // Branch: include pool[pos].
    let p = &pool[pos];
    let mut ok = total_miss + p.missing as u64 <= total_budget;
    if ok && p.miss_mask != 0 {
        for i in 0..cand_len {
            if p.miss_mask >> i & 1 == 1 && node_miss[i] as u64 + 1 > node_budget {
                ok = false;
                break;
            }
        }
    }
    if ok {
        for i in 0..cand_len {
            if p.miss_mask >> i & 1 == 1 {
                node_miss[i] += 1;
            }
        }
        chosen.push(pos);
        if search_exact(
            pool,
            prefix_miss,
            m,
            node_budget,
            total_budget,
            cand_len,
            pos + 1,
            total_miss + p.missing as u64,
            node_miss,
            chosen,
        ) {
            return true;
        }
        chosen.pop();
        for i in 0..cand_len {
            if p.miss_mask >> i & 1 == 1 {
                node_miss[i] -= 1;
            }
        }
    }
    // Branch: skip pool[pos]. The cheapest-completion bound above already
    // covers the "cannot reach m" and total-budget fathoming for this branch.
    search_exact(
        pool,
        prefix_miss,
        m,
        node_budget,
        total_budget,
        cand_len,
        pos + 1,
        total_miss,
        node_miss,
        chosen,
    )
}

/// Independent re-check of the three relaxation constraints for a support
/// set, used by tests and the constraint audit.
pub fn verify_constraints(
    h: &Hypergraph,
    candidate: &[NodeId],
    params: &RelaxationParams,
    edge_indexes: &[u32],
) -> bool {
    let m = edge_indexes.len() as u64;
    let cand_len = candidate.len() as u64;
    let mut total_miss = 0u64;
    let mut node_miss = vec![0u64; candidate.len()];
    for &j in edge_indexes {
        let nodes = &h.edges[j as usize].nodes;
        let mut edge_miss = 0u64;
        for (i, &v) in candidate.iter().enumerate() {
            if nodes.binary_search(&v).is_err() {
                edge_miss += 1;
                node_miss[i] += 1;
            }
        }
        if !params.eps_e.le_times(edge_miss, cand_len) {
            return false;
        }
        total_miss += edge_miss;
    }
    if !params.eps_t.le_times(total_miss, cand_len * m) {
        return false;
    }
    node_miss.iter().all(|&c| params.eps_v.le_times(c, m))
}
