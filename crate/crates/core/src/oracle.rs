//! Brute-force reference forest. Every query is answered by traversal.

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::{VertexId, INF};

#[derive(Clone, Debug)]
pub struct OracleForest<S: AggregateSpec> {
    spec: S,
    adj: Vec<Vec<(VertexId, S::Value)>>,
    values: Vec<S::Value>,
    marked: Vec<bool>,
    edges: usize,
}

impl<S: AggregateSpec> OracleForest<S> {
    pub fn new(n: usize, spec: S) -> Self {
        let id = spec.identity();
        OracleForest {
            spec,
            adj: vec![Vec::new(); n],
            values: vec![id; n],
            marked: vec![false; n],
            edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, S::Value)> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].iter().any(|&(x, _)| x == v)
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<S::Value> {
        self.adj[u as usize].iter().find(|&&(x, _)| x == v).map(|&(_, w)| w)
    }

    /// All edges with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, S::Value)> {
        let mut out = Vec::with_capacity(self.edges);
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if (u as VertexId) < v {
                    out.push((u as VertexId, v, w));
                }
            }
        }
        out
    }

    pub fn heap_bytes(&self) -> usize {
        use std::mem::size_of;
        let lists: usize = self.adj.iter().map(|l| l.capacity() * size_of::<(VertexId, S::Value)>()).sum();
        lists + self.adj.capacity() * size_of::<Vec<(VertexId, S::Value)>>()
            + self.values.capacity() * size_of::<S::Value>()
            + self.marked.capacity()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(ForestError::OutOfRange(v))
        }
    }

    pub fn link(&mut self, u: VertexId, v: VertexId, w: S::Value) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(ForestError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        if self.connected(u, v) {
            return Err(ForestError::Cycle(u, v));
        }
        self.adj[u as usize].push((v, w));
        self.adj[v as usize].push((u, w));
        self.edges += 1;
        Ok(())
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        let iu = self.adj[u as usize].iter().position(|&(x, _)| x == v);
        let iv = self.adj[v as usize].iter().position(|&(x, _)| x == u);
        match (iu, iv) {
            (Some(a), Some(b)) => {
                self.adj[u as usize].swap_remove(a);
                self.adj[v as usize].swap_remove(b);
                self.edges -= 1;
                Ok(())
            }
            _ => Err(ForestError::MissingEdge(u, v)),
        }
    }

    pub fn set_value(&mut self, v: VertexId, x: S::Value) {
        self.values[v as usize] = x;
    }

    pub fn value(&self, v: VertexId) -> S::Value {
        self.values[v as usize]
    }

    pub fn mark(&mut self, v: VertexId, on: bool) {
        self.marked[v as usize] = on;
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v as usize]
    }

    /// Parent pointers of a traversal rooted at `r`, plus visit order.
    fn rooted(&self, r: VertexId) -> (Vec<VertexId>, Vec<VertexId>) {
        let mut parent = vec![VertexId::MAX; self.n()];
        let mut order = vec![r];
        parent[r as usize] = r;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(y, _) in &self.adj[x as usize] {
                if parent[y as usize] == VertexId::MAX {
                    parent[y as usize] = x;
                    order.push(y);
                }
            }
        }
        (parent, order)
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        if u == v {
            return true;
        }
        let (parent, _) = self.rooted(u);
        parent[v as usize] != VertexId::MAX
    }

    /// Component label per vertex (smallest vertex id in the component).
    pub fn components(&self) -> Vec<VertexId> {
        let mut label = vec![VertexId::MAX; self.n()];
        for s in 0..self.n() as VertexId {
            if label[s as usize] != VertexId::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s as usize] = s;
            while let Some(x) = stack.pop() {
                for &(y, _) in &self.adj[x as usize] {
                    if label[y as usize] == VertexId::MAX {
                        label[y as usize] = s;
                        stack.push(y);
                    }
                }
            }
        }
        label
    }

    /// Vertices of the u-v path, starting at u.
    pub fn path_vertices(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        let (parent, _) = self.rooted(u);
        if parent[v as usize] == VertexId::MAX {
            return Err(ForestError::NotConnected(u, v));
        }
        let mut out = vec![v];
        let mut x = v;
        while x != u {
            x = parent[x as usize];
            out.push(x);
        }
        out.reverse();
        Ok(out)
    }

    pub fn path_aggregate(&self, u: VertexId, v: VertexId) -> Result<S::Value> {
        let p = self.path_vertices(u, v)?;
        let mut acc = self.spec.identity();
        for w in p.windows(2) {
            acc = self.spec.combine(acc, self.edge_weight(w[0], w[1]).unwrap());
        }
        Ok(acc)
    }

    pub fn hops(&self, u: VertexId, v: VertexId) -> Result<u64> {
        Ok(self.path_vertices(u, v)?.len() as u64 - 1)
    }

    /// Combine of vertex values on v's side of the edge (v, p).
    pub fn subtree_aggregate(&self, v: VertexId, p: VertexId) -> Result<S::Value> {
        if !self.has_edge(v, p) {
            return Err(ForestError::MissingEdge(v, p));
        }
        let mut acc = self.spec.identity();
        let mut stack = vec![(v, p)];
        while let Some((x, from)) = stack.pop() {
            acc = self.spec.combine(acc, self.values[x as usize]);
            for &(y, _) in &self.adj[x as usize] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        Ok(acc)
    }

    /// Lowest common ancestor of u and v with the tree rooted at r.
    pub fn lca(&self, u: VertexId, v: VertexId, r: VertexId) -> Result<VertexId> {
        let (parent, _) = self.rooted(r);
        for x in [u, v] {
            if parent[x as usize] == VertexId::MAX {
                return Err(ForestError::NotConnected(x, r));
            }
        }
        let mut on = vec![false; self.n()];
        let mut x = u;
        loop {
            on[x as usize] = true;
            if x == r {
                break;
            }
            x = parent[x as usize];
        }
        let mut y = v;
        while !on[y as usize] {
            y = parent[y as usize];
        }
        Ok(y)
    }

    /// Weighted distances from `s` within its component; `INF` elsewhere.
    pub fn distances(&self, s: VertexId) -> Vec<u64> {
        let mut dist = vec![INF; self.n()];
        dist[s as usize] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let dx = dist[x as usize];
            for &(y, w) in &self.adj[x as usize] {
                if dist[y as usize] == INF {
                    dist[y as usize] = dx + self.spec.length(w);
                    stack.push(y);
                }
            }
        }
        dist
    }

    /// Longest path length in v's component, by double sweep.
    pub fn diameter(&self, v: VertexId) -> u64 {
        let far = |d: &Vec<u64>| {
            let mut best = (0u64, v);
            for (i, &x) in d.iter().enumerate() {
                if x != INF && x > best.0 {
                    best = (x, i as VertexId);
                }
            }
            best
        };
        let (_, a) = far(&self.distances(v));
        far(&self.distances(a)).0
    }

    /// Largest component diameter, counting every edge as length 1.
    pub fn hop_diameter(&self) -> u64 {
        let label = self.components();
        let mut best = 0;
        for s in 0..self.n() {
            if label[s] as usize != s {
                continue;
            }
            let (_, order) = self.rooted(s as VertexId);
            let a = *order.last().unwrap();
            let (parent, order) = self.rooted(a);
            let b = *order.last().unwrap();
            let mut len = 0;
            let mut x = b;
            while x != a {
                x = parent[x as usize];
                len += 1;
            }
            best = best.max(len);
        }
        best
    }

    pub fn nearest_marked(&self, v: VertexId) -> u64 {
        let d = self.distances(v);
        (0..self.n())
            .filter(|&i| self.marked[i])
            .map(|i| d[i])
            .min()
            .unwrap_or(INF)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{MaxI64, SumI64};

    fn five() -> OracleForest<SumI64> {
        // 0 - 1 - 2, 1 - 3 - 4
        let mut f = OracleForest::new(5, SumI64);
        f.link(0, 1, 2).unwrap();
        f.link(1, 2, 3).unwrap();
        f.link(1, 3, 5).unwrap();
        f.link(3, 4, 7).unwrap();
        for v in 0..5 {
            f.set_value(v, 10 + v as i64);
        }
        f
    }

    #[test]
    fn link_cut_errors() {
        let mut f = OracleForest::new(3, SumI64);
        f.link(0, 1, 5).unwrap();
        assert_eq!(f.edges(), vec![(0, 1, 5)]);
        assert_eq!(f.link(0, 1, 1), Err(ForestError::DuplicateEdge(0, 1)));
        f.link(1, 2, 1).unwrap();
        assert_eq!(f.link(0, 2, 1), Err(ForestError::Cycle(0, 2)));
        assert_eq!(f.cut(0, 2), Err(ForestError::MissingEdge(0, 2)));
        f.cut(0, 1).unwrap();
        assert!(!f.connected(0, 1));
        assert!(f.connected(1, 2));
    }

    #[test]
    fn star_cut() {
        let mut f = OracleForest::new(5, SumI64);
        for l in 1..5 {
            f.link(0, l, 1).unwrap();
        }
        f.cut(0, 3).unwrap();
        let c = f.components();
        assert_eq!(c[0], c[1]);
        assert_eq!(c[0], c[4]);
        assert_ne!(c[0], c[3]);
    }

    #[test]
    fn hand_checked_fixture() {
        let f = five();
        assert_eq!(f.path_aggregate(0, 4).unwrap(), 2 + 5 + 7);
        assert_eq!(f.path_aggregate(2, 2).unwrap(), 0);
        assert_eq!(f.subtree_aggregate(3, 1).unwrap(), 13 + 14);
        assert_eq!(f.subtree_aggregate(1, 3).unwrap(), 10 + 11 + 12);
        assert_eq!(f.lca(0, 2, 4).unwrap(), 1);
        assert_eq!(f.lca(4, 3, 0).unwrap(), 3);
        assert_eq!(f.lca(0, 4, 0).unwrap(), 0);
        assert_eq!(f.diameter(2), 3 + 5 + 7);
        assert_eq!(f.hop_diameter(), 3);
        assert_eq!(f.nearest_marked(0), INF);
        let mut g = f.clone();
        g.mark(4, true);
        g.mark(2, true);
        assert_eq!(g.nearest_marked(0), 5);
        assert_eq!(g.nearest_marked(3), 7);
        assert_eq!(g.nearest_marked(4), 0);
    }

    #[test]
    fn max_path() {
        let mut f = OracleForest::new(3, MaxI64);
        f.link(0, 1, 5).unwrap();
        f.link(1, 2, 7).unwrap();
        assert_eq!(f.path_aggregate(0, 2).unwrap(), 7);
        assert_eq!(f.path_aggregate(1, 1).unwrap(), i64::MIN);
        assert_eq!(f.diameter(0), 2);
    }
}
