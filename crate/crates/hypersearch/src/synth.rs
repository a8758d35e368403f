//! Seeded synthetic hypergraph generation and dataset replication, used by
//! the scalability tests and the benchmark suite.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{Hyperedge, Hypergraph, NodeId};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub num_nodes: u32,
    pub num_edges: usize,
    pub min_size: usize,
    pub max_size: usize,
    /// Attach timestamps 0..num_edges in generation order.
    pub timestamped: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            num_nodes: 30,
            num_edges: 60,
            min_size: 1,
            max_size: 4,
            timestamped: false,
        }
    }
}

/// Random hypergraph with skewed node popularity: node v is drawn with weight
/// 1 / (v + 1), giving the heavy-tailed degree profile typical of real data.
pub fn random_hypergraph(config: &SynthConfig, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..config.num_nodes).map(|v| 1.0 / (v as f64 + 1.0)).collect();
    let dist = rand::distributions::WeightedIndex::new(&weights).unwrap();
    let edges = (0..config.num_edges)
        .map(|i| {
            let size = rng.gen_range(config.min_size..=config.max_size.min(config.num_nodes as usize));
            let mut nodes = Vec::with_capacity(size);
            while nodes.len() < size {
                let v = dist.sample(&mut rng) as NodeId;
                if !nodes.contains(&v) {
                    nodes.push(v);
                }
            }
            if config.timestamped {
                Hyperedge::with_raw_timestamp(nodes, i as i64)
            } else {
                Hyperedge::new(nodes)
            }
        })
        .collect();
    Hypergraph::build(edges, config.num_nodes).unwrap()
}

/// Tile `times` disjoint copies of the hypergraph side by side: copy c maps
/// node v to c * num_nodes + v. Node count, edge count, and per-node degrees
/// all scale linearly while the structure within each copy is preserved.
pub fn replicate(h: &Hypergraph, times: u32) -> Hypergraph {
    assert!(times >= 1);
    let mut edges = Vec::with_capacity(h.num_edges() * times as usize);
    for c in 0..times {
        let offset = c * h.num_nodes;
        for e in &h.edges {
            let nodes = e.nodes.iter().map(|&v| v + offset).collect();
            let mut copy = Hyperedge::new(nodes);
            copy.timestamp = e.timestamp;
            copy.raw_timestamp = e.raw_timestamp;
            edges.push(copy);
        }
    }
    let mut out = Hypergraph::build(edges, h.num_nodes * times).unwrap();
    if let Some(features) = &h.features {
        let mut tiled = Vec::with_capacity(features.len() * times as usize);
        for _ in 0..times {
            tiled.extend(features.iter().cloned());
        }
        out.features = Some(tiled);
    }
    out
}

/// Stack `times` copies of the edge multiset over the same node set. The
/// candidate space stays fixed while per-candidate support work scales with
/// the edge count, which is the regime the scalability checks measure.
pub fn replicate_edges(h: &Hypergraph, times: u32) -> Hypergraph {
    assert!(times >= 1);
    let mut edges = Vec::with_capacity(h.num_edges() * times as usize);
    for _ in 0..times {
        edges.extend(h.edges.iter().cloned());
    }
    let mut out = Hypergraph::build(edges, h.num_nodes).unwrap();
    out.features = h.features.clone();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_deterministic() {
        let cfg = SynthConfig::default();
        let a = random_hypergraph(&cfg, 42);
        let b = random_hypergraph(&cfg, 42);
        assert_eq!(a.edges, b.edges);
        let c = random_hypergraph(&cfg, 43);
        assert_ne!(a.edges, c.edges);
    }

    #[test]
    fn generation_respects_config() {
        let cfg = SynthConfig {
            num_nodes: 10,
            num_edges: 25,
            min_size: 2,
            max_size: 3,
            timestamped: true,
        };
        let h = random_hypergraph(&cfg, 0);
        assert_eq!(h.num_edges(), 25);
        assert!(h.is_timestamped());
        for e in &h.edges {
            assert!((2..=3).contains(&e.size()));
            assert!(e.nodes.iter().all(|&v| v < 10));
        }
    }

    #[test]
    fn replicate_scales_counts() {
        let h = random_hypergraph(&SynthConfig::default(), 1);
        let r3 = replicate(&h, 3);
        assert_eq!(r3.num_nodes, 3 * h.num_nodes);
        assert_eq!(r3.num_edges(), 3 * h.num_edges());
        // Copies are node-disjoint: degree of the image of v in copy c equals
        // the degree of v in the original.
        for v in 0..h.num_nodes {
            for c in 0..3 {
                assert_eq!(
                    r3.incidence[(c * h.num_nodes + v) as usize].len(),
                    h.incidence[v as usize].len()
                );
            }
        }
    }

    #[test]
    fn replicate_edges_scales_degrees() {
        let h = random_hypergraph(&SynthConfig::default(), 4);
        let r3 = replicate_edges(&h, 3);
        assert_eq!(r3.num_nodes, h.num_nodes);
        assert_eq!(r3.num_edges(), 3 * h.num_edges());
        for v in 0..h.num_nodes {
            assert_eq!(
                r3.incidence[v as usize].len(),
                3 * h.incidence[v as usize].len()
            );
        }
    }

    #[test]
    fn replicate_identity() {
        let h = random_hypergraph(&SynthConfig::default(), 2);
        let r1 = replicate(&h, 1);
        assert_eq!(r1.edges, h.edges);
        assert_eq!(r1.num_nodes, h.num_nodes);
    }
}
