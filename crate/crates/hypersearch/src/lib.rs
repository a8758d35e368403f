//! Search-based prediction of new hyperedges.
//!
//! The pipeline: ingest a dataset ([`ingest`]), split it chronologically or
//! randomly, tune relaxation and weighting parameters on a validation
//! carve-out ([`eval::grid_search`]), enumerate candidate node sets with a
//! bounded depth-first search ([`search::predict`]), and evaluate the ranked
//! predictions against held-out edges ([`eval`]).
//!
//! Scores count observed edges that approximately contain a candidate, with
//! three rational relaxation budgets (per-node, per-edge, total) solved
//! exactly by [`support::max_support`]. Subtrees are pruned with the greedy
//! upper bound in [`bounds`].

pub mod bounds;
pub mod error;
pub mod eval;
pub mod hypergraph;
pub mod ingest;
pub mod ratio;
pub mod scoring;
pub mod search;
pub mod support;
pub mod synth;

pub use error::{Error, Result};
pub use hypergraph::{Hyperedge, Hypergraph, NodeId};
pub use ratio::Ratio;
pub use scoring::ScoreParams;
pub use search::{predict, PredictionReport, PruneMode};
pub use support::RelaxationParams;
