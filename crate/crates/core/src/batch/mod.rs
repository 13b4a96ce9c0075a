//! Batch updates: a set of insertions and deletions applied at once.
//!
//! The whole batch is validated before anything changes. Then the ancestors
//! of all endpoints are freed in one shared walk, every edge change is
//! applied at the leaves, and the hierarchy is rebuilt level by level. Each
//! level computes its merges from read-only scans (high-degree claims, then
//! a chain matching of low-degree roots, then proposals to already-parented
//! neighbors) through a [`Primitives`] executor; structural writes are
//! applied in a fixed order so the result does not depend on thread count.

mod prims;

pub use prims::{Parallel, Primitives, Sequential};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::hierarchy::{Hierarchy, Kind};
use crate::VertexId;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Update<V> {
    Insert(VertexId, VertexId, V),
    Delete(VertexId, VertexId),
}

impl<V> Update<V> {
    pub fn ends(&self) -> (VertexId, VertexId) {
        match *self {
            Update::Insert(u, v, _) | Update::Delete(u, v) => (u, v),
        }
    }

    pub fn is_insert(&self) -> bool {
        matches!(self, Update::Insert(..))
    }
}

fn batch_err(index: usize, cause: ForestError) -> ForestError {
    ForestError::Batch { index, cause: Box::new(cause) }
}

fn find(uf: &mut FxHashMap<u32, u32>, x: u32) -> u32 {
    let mut r = x;
    while let Some(&p) = uf.get(&r) {
        if p == r {
            break;
        }
        r = p;
    }
    let mut y = x;
    while y != r {
        let p = uf.insert(y, r).unwrap_or(r);
        y = p;
    }
    r
}

impl<S: AggregateSpec> Hierarchy<S> {
    /// Apply a batch with the sequential reference executor.
    pub fn batch_update(&mut self, ups: &[Update<S::Value>]) -> Result<()> {
        self.batch_update_with(ups, &Sequential)
    }

    pub fn batch_update_with<P: Primitives>(&mut self, ups: &[Update<S::Value>], p: &P) -> Result<()> {
        self.check_batch(ups, p)?;
        if ups.is_empty() {
            return Ok(());
        }
        p.install(|| self.apply_batch(ups, p));
        Ok(())
    }

    /// Reject a batch unless every ordering of it is a valid sequence of
    /// single updates. Nothing is modified.
    pub fn check_batch<P: Primitives>(&self, ups: &[Update<S::Value>], p: &P) -> Result<()> {
        let mut keys: FxHashMap<(u32, u32), usize> = FxHashMap::default();
        for (i, up) in ups.iter().enumerate() {
            let (u, v) = up.ends();
            self.check_vertex(u).map_err(|e| batch_err(i, e))?;
            self.check_vertex(v).map_err(|e| batch_err(i, e))?;
            if u == v {
                return Err(batch_err(i, ForestError::SelfLoop(u)));
            }
            if keys.insert((u.min(v), u.max(v)), i).is_some() {
                return Err(batch_err(i, ForestError::DuplicateEdge(u, v)));
            }
            match (up.is_insert(), self.has_edge(u, v)) {
                (true, true) => return Err(batch_err(i, ForestError::DuplicateEdge(u, v))),
                (false, false) => return Err(batch_err(i, ForestError::MissingEdge(u, v))),
                _ => {}
            }
        }
        // inserts first is one of the orderings, so the inserts alone must
        // keep the current forest acyclic
        let mut uf: FxHashMap<u32, u32> = FxHashMap::default();
        for (i, up) in ups.iter().enumerate() {
            if let Update::Insert(u, v, _) = *up {
                let a = find(&mut uf, self.root_of(u));
                let b = find(&mut uf, self.root_of(v));
                if a == b {
                    return Err(batch_err(i, ForestError::Cycle(u, v)));
                }
                uf.insert(a, b);
            }
        }
        if self.kind == Kind::Topology {
            let mut pairs = Vec::new();
            for (i, up) in ups.iter().enumerate() {
                if up.is_insert() {
                    let (u, v) = up.ends();
                    pairs.push((u, i));
                    pairs.push((v, i));
                }
            }
            for (v, idx) in p.group_by_endpoint(pairs) {
                let room = 3usize.saturating_sub(self.vertex_degree(v));
                if idx.len() > room {
                    return Err(batch_err(idx[room], ForestError::Degree(v, 3)));
                }
            }
        }
        Ok(())
    }

    fn apply_batch<P: Primitives>(&mut self, ups: &[Update<S::Value>], p: &P) {
        self.begin_update();
        let raw: Vec<u32> = ups.iter().flat_map(|u| [u.ends().0, u.ends().1]).collect();
        let ends = p.map_and_dedup(&raw, |x| x);
        let mut seen = FxHashSet::default();
        for &v in &ends {
            self.delete_ancestors_from(v, Some(&mut seen));
        }
        for up in ups {
            if let Update::Delete(u, v) = *up {
                let e = self.edge_id(u, v).expect("validated");
                self.unlink_up(u, v);
                self.drop_edge(e);
            }
        }
        for up in ups {
            if let Update::Insert(u, v, w) = *up {
                let e = self.new_edge(u, v, w);
                self.link_up(u, v, e << 1);
            }
        }
        for &v in &ends {
            self.queue_root(v);
        }
        let mut i = 0;
        while i < self.sc.roots.len().max(self.sc.shrunk.len()) {
            if i >= self.sc.roots.len() {
                self.sc.roots.resize_with(i + 1, Vec::new);
            }
            if self.kind == Kind::Ufo {
                self.repair_level(i as u32);
            }
            if !self.sc.roots[i].is_empty() {
                self.match_level(i as u32, p);
                self.give_singletons(i as u32);
            }
            i += 1;
        }
        self.end_update_with(p);
    }

    fn match_level<P: Primitives>(&mut self, i: u32, p: &P) {
        let queued = self.sc.roots[i as usize].clone();
        let roots = p.map_and_dedup(&queued, |x| if self.live_root(x, i) { x } else { u32::MAX });
        let degs = p.map(&roots, |&x| self.degree(x));
        let sum: u64 = degs.iter().map(|&d| d as u64).sum();
        let l = i as usize;
        let rd = &mut self.stats.root_degree_per_level;
        if rd.len() <= l {
            rd.resize(l + 1, 0);
        }
        rd[l] += sum;
        if let Some(&m) = degs.iter().max() {
            self.stats.max_root_degree = self.stats.max_root_degree.max(m);
        }

        // high-degree roots claim their degree-1 neighbors
        for (k, &x) in roots.iter().enumerate() {
            match self.kind {
                Kind::Ufo if degs[k] >= 3 => self.make_star(x, i),
                Kind::Topology if degs[k] == 3 && self.live_root(x, i) => {
                    let y = self.nbrs(x).into_iter().map(|e| e.0).find(|&y| self.degree(y) == 1 && self.can_join(x, y));
                    if let Some(y) = y {
                        self.do_join(x, y, i);
                    }
                }
                _ => {}
            }
        }

        // chains of unparented low-degree roots
        let low: Vec<u32> = roots
            .iter()
            .copied()
            .filter(|&x| self.live_root(x, i) && self.degree(x) <= 2)
            .collect();
        let local = |y: u32| low.binary_search(&y).map(|j| j as u32).unwrap_or(u32::MAX);
        let nb: Vec<[u32; 2]> = p.map(&low, |&x| {
            let mut e = [u32::MAX; 2];
            let mut k = 0;
            for (y, _) in self.cl[x as usize].adj.iter() {
                let j = local(y);
                if j != u32::MAX && k < 2 {
                    e[k] = j;
                    k += 1;
                }
            }
            e
        });
        for (a, b) in p.chain_matching(&nb) {
            let (x, y) = (low[a as usize], low[b as usize]);
            let q = self.new_cluster(i + 1);
            self.attach(x, q);
            self.attach(y, q);
        }

        // whatever is left proposes to its first joinable neighbor; the
        // lowest proposer wins each contested partner
        let mut left: Vec<u32> = roots.iter().copied().filter(|&x| self.live_root(x, i)).collect();
        let mut joined = FxHashSet::default();
        while !left.is_empty() {
            let props = p.map(&left, |&x| {
                let y = self.nbrs(x).into_iter().map(|e| e.0).find(|&y| self.can_join(x, y));
                y.map(|y| (x, y))
            });
            let mut won = Vec::new();
            for (x, y) in props.into_iter().flatten() {
                if self.live_root(x, i) && self.can_join(x, y) {
                    self.do_join(x, y, i);
                    won.push(x);
                }
            }
            if won.is_empty() {
                break;
            }
            p.concurrent_set(&mut joined, &won, &[]);
            left.retain(|x| !joined.contains(x) && self.live_root(*x, i));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::SumI64;
    use crate::hierarchy::Config;

    #[test]
    fn rejects_before_mutating() {
        let mut h = Hierarchy::new(4, SumI64, Kind::Ufo, Config::full());
        h.batch_update(&[Update::Insert(0, 1, 1), Update::Insert(1, 2, 1)]).unwrap();
        let before = h.edges();
        let bad = [Update::Insert(2, 3, 1), Update::Insert(3, 0, 1)];
        assert!(matches!(h.batch_update(&bad), Err(ForestError::Batch { index: 1, .. })));
        assert!(matches!(h.batch_update(&[Update::Delete(0, 2)]), Err(ForestError::Batch { index: 0, .. })));
        assert_eq!(h.edges(), before);
        h.validate().unwrap();
    }

    #[test]
    fn insert_before_delete_ordering_counts() {
        // deleting (0,1) would make (0,2) legal, but not if inserted first
        let mut h = Hierarchy::new(3, SumI64, Kind::Ufo, Config::full());
        h.batch_update(&[Update::Insert(0, 1, 1), Update::Insert(1, 2, 1)]).unwrap();
        let b = [Update::Delete(0, 1), Update::Insert(0, 2, 1)];
        assert!(h.batch_update(&b).is_err());
    }

    #[test]
    fn topology_degree_checked_on_inserts() {
        let mut h = Hierarchy::new(5, SumI64, Kind::Topology, Config::full());
        let b: Vec<_> = (1..5).map(|v| Update::Insert(0, v, 1)).collect();
        assert!(matches!(h.batch_update(&b), Err(ForestError::Batch { index: 3, .. })));
    }
}
