//! Public faces of the two contraction hierarchies.

use std::ops::{Deref, DerefMut};

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::hierarchy::{Config, Hierarchy, Kind};
use crate::VertexId;

/// Contraction with unbounded fan-out: a high-degree cluster absorbs all of
/// its degree-1 neighbors in one round. Any vertex degree is allowed.
pub struct UfoTree<S: AggregateSpec>(Hierarchy<S>);

/// Classic topology tree. Every vertex must keep degree at most 3.
pub struct TopologyTree<S: AggregateSpec>(Hierarchy<S>);

macro_rules! face {
    ($t:ident, $kind:expr) => {
        impl<S: AggregateSpec> $t<S> {
            pub fn new(n: usize, spec: S, cfg: Config) -> Self {
                $t(Hierarchy::new(n, spec, $kind, cfg))
            }

            /// Build over an edge list with a single batch insertion.
            pub fn build(n: usize, edges: &[(VertexId, VertexId, S::Value)], spec: S, cfg: Config) -> Result<Self> {
                let mut t = Self::new(n, spec, cfg);
                t.0.build_from(edges)?;
                Ok(t)
            }

            pub fn into_inner(self) -> Hierarchy<S> {
                self.0
            }
        }

        impl<S: AggregateSpec> Deref for $t<S> {
            type Target = Hierarchy<S>;
            fn deref(&self) -> &Hierarchy<S> {
                &self.0
            }
        }

        impl<S: AggregateSpec> DerefMut for $t<S> {
            fn deref_mut(&mut self) -> &mut Hierarchy<S> {
                &mut self.0
            }
        }
    };
}

face!(UfoTree, Kind::Ufo);
face!(TopologyTree, Kind::Topology);

impl<S: AggregateSpec> Hierarchy<S> {
    /// Insert all edges of an acyclic list into an empty structure.
    pub fn build_from(&mut self, edges: &[(VertexId, VertexId, S::Value)]) -> Result<()> {
        if self.kind == Kind::Topology {
            let mut deg = vec![0usize; self.n];
            for &(u, v, _) in edges {
                for x in [u, v] {
                    self.check_vertex(x)?;
                    deg[x as usize] += 1;
                    if deg[x as usize] > 3 {
                        return Err(ForestError::Degree(x, 3));
                    }
                }
            }
        }
        let ups: Vec<_> = edges.iter().map(|&(u, v, w)| crate::batch::Update::Insert(u, v, w)).collect();
        self.batch_update(&ups)
    }
}
