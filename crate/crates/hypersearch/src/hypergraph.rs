//! In-memory hypergraph with the incidence index used by the support solver
//! and the search layer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Node-universe size above which per-edge bitsets are not built and
/// intersection counts fall back to binary search on the sorted node lists.
pub const DEFAULT_BITSET_THRESHOLD: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperedge {
    /// Strictly ascending, duplicate-free. Canonical form: set equality is
    /// sequence equality.
    pub nodes: Vec<NodeId>,
    /// Normalized timestamp in [0, 1], set by `normalize_timestamps`.
    pub timestamp: Option<f64>,
    /// Timestamp in original units.
    pub raw_timestamp: Option<i64>,
}

impl Hyperedge {
    pub fn new(mut nodes: Vec<NodeId>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        Hyperedge {
            nodes,
            timestamp: None,
            raw_timestamp: None,
        }
    }

    pub fn with_raw_timestamp(nodes: Vec<NodeId>, raw: i64) -> Self {
        let mut e = Hyperedge::new(nodes);
        e.raw_timestamp = Some(raw);
        e
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

/// Fixed-width bitset over the node universe.
#[derive(Debug, Clone)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn from_sorted(nodes: &[NodeId], num_nodes: u32) -> Self {
        let mut words = vec![0u64; (num_nodes as usize).div_ceil(64)];
        for &v in nodes {
            words[(v / 64) as usize] |= 1u64 << (v % 64);
        }
        Bitset { words }
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        (self.words[(v / 64) as usize] >> (v % 64)) & 1 == 1
    }
}

#[derive(Debug, Clone)]
pub struct Hypergraph {
    pub num_nodes: u32,
    pub edges: Vec<Hyperedge>,
    /// incidence[v] = indexes of edges containing v, ascending.
    pub incidence: Vec<Vec<u32>>,
    /// Optional per-node token-id sets (sorted, duplicate-free).
    pub features: Option<Vec<Vec<u32>>>,
    pub max_size: usize,
    edge_bits: Option<Vec<Bitset>>,
}

impl Hypergraph {
    pub fn build(edges: Vec<Hyperedge>, num_nodes: u32) -> Result<Self> {
        Self::build_with_threshold(edges, num_nodes, DEFAULT_BITSET_THRESHOLD)
    }

    pub fn build_with_threshold(
        edges: Vec<Hyperedge>,
        num_nodes: u32,
        bitset_threshold: u32,
    ) -> Result<Self> {
        let mut incidence = vec![Vec::new(); num_nodes as usize];
        let mut max_size = 0;
        for (j, e) in edges.iter().enumerate() {
            if e.nodes.is_empty() {
                return Err(Error::EmptyEdge(j));
            }
            for &v in &e.nodes {
                if v >= num_nodes {
                    return Err(Error::NodeOutOfRange { id: v, num_nodes });
                }
                incidence[v as usize].push(j as u32);
            }
            max_size = max_size.max(e.nodes.len());
        }
        let edge_bits = (num_nodes <= bitset_threshold).then(|| {
            edges
                .iter()
                .map(|e| Bitset::from_sorted(&e.nodes, num_nodes))
                .collect()
        });
        Ok(Hypergraph {
            num_nodes,
            edges,
            incidence,
            features: None,
            max_size,
            edge_bits,
        })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_timestamped(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.raw_timestamp.is_some())
    }

    pub fn has_features(&self) -> bool {
        self.features.is_some()
    }

    /// |candidate ∩ edges[j]| for a sorted candidate.
    pub fn intersect_count(&self, candidate: &[NodeId], edge_idx: u32) -> u32 {
        match &self.edge_bits {
            Some(bits) => {
                let b = &bits[edge_idx as usize];
                candidate.iter().filter(|&&v| b.contains(v)).count() as u32
            }
            None => {
                let nodes = &self.edges[edge_idx as usize].nodes;
                candidate
                    .iter()
                    .filter(|v| nodes.binary_search(v).is_ok())
                    .count() as u32
            }
        }
    }
}

/// |candidate ∩ observed| / |observed|. `observed` must be non-empty.
pub fn overlap_ratio(candidate: &[NodeId], observed: &[NodeId]) -> f64 {
    debug_assert!(!observed.is_empty());
    intersection_size(candidate, observed) as f64 / observed.len() as f64
}

/// |{v in candidate : v not in observed}|.
pub fn missing_count(candidate: &[NodeId], observed: &[NodeId]) -> usize {
    candidate.len() - intersection_size(candidate, observed)
}

/// Intersection size of two sorted duplicate-free slices.
pub fn intersection_size(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
