//! Dynamic forests maintained by tree contraction.
//!
//! [`UfoTree`] handles arbitrary degrees, [`TopologyTree`] needs degree at
//! most 3 and [`TernarizedTopology`] lifts that restriction by splitting
//! high-degree vertices. [`LinkCutTree`] and [`OracleForest`] serve as
//! baselines.

pub mod aggregate;
pub mod batch;
pub mod error;
pub mod hierarchy;
pub mod link_cut;
pub mod oracle;
pub mod rank_tree;
pub mod ternarize;
pub mod trees;
pub mod workloads;

pub type VertexId = u32;

/// Distance sentinel for "unreachable".
pub const INF: u64 = u64::MAX;

pub use aggregate::{AggregateSpec, MaxI64, SumI64, SumMaxI64, Unit};
pub use batch::{Parallel, Primitives, Sequential, Update};
pub use error::{ForestError, Result};
pub use hierarchy::{Augment, Config, Hierarchy, Kind, UpdateStats};
pub use link_cut::LinkCutTree;
pub use oracle::OracleForest;
pub use ternarize::{SurrogateOp, TernarizedTopology, TernaryMap};
pub use trees::{TopologyTree, UfoTree};
