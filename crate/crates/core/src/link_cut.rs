//! Splay-based link-cut tree with edge-weighted path aggregates.
//!
//! Edge weights live on the vertices. Within a preferred path each node
//! keeps the weight of the edge to its predecessor (`wu`) and to its
//! successor (`wd`); the top node of a path parks the weight of its
//! non-preferred edge to the path parent in `wu`, outside every aggregate.
//! Reversing a path swaps the two.

use rustc_hash::FxHashMap;

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::VertexId;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node<V> {
    ch: [u32; 2],
    /// Splay parent, or path parent at the root of an auxiliary tree.
    par: u32,
    flip: bool,
    wu: V,
    wd: V,
    /// `wu` of the leftmost and `wd` of the rightmost node of the subtree.
    lw: V,
    rw: V,
    /// Combined weight of the edges inside the subtree's subpath.
    agg: V,
}

pub struct LinkCutTree<S: AggregateSpec> {
    spec: S,
    t: Vec<Node<S::Value>>,
    edges: FxHashMap<(VertexId, VertexId), S::Value>,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<S: AggregateSpec> LinkCutTree<S> {
    pub fn new(n: usize, spec: S) -> Self {
        let id = spec.identity();
        let node = Node { ch: [NONE; 2], par: NONE, flip: false, wu: id, wd: id, lw: id, rw: id, agg: id };
        LinkCutTree { spec, t: vec![node; n], edges: FxHashMap::default() }
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.t.len() {
            Ok(())
        } else {
            Err(ForestError::OutOfRange(v))
        }
    }

    #[inline]
    fn is_root(&self, x: u32) -> bool {
        let p = self.t[x as usize].par;
        p == NONE || (self.t[p as usize].ch[0] != x && self.t[p as usize].ch[1] != x)
    }

    /// Reverse the subpath of `x`'s subtree.
    fn reverse(&mut self, x: u32) {
        if x == NONE {
            return;
        }
        let n = &mut self.t[x as usize];
        n.flip ^= true;
        n.ch.swap(0, 1);
        std::mem::swap(&mut n.wu, &mut n.wd);
        std::mem::swap(&mut n.lw, &mut n.rw);
    }

    fn push(&mut self, x: u32) {
        if self.t[x as usize].flip {
            let [a, b] = self.t[x as usize].ch;
            self.reverse(a);
            self.reverse(b);
            self.t[x as usize].flip = false;
        }
    }

    fn pull(&mut self, x: u32) {
        let id = self.spec.identity();
        let Node { ch: [l, r], wu, wd, .. } = self.t[x as usize];
        let (mut agg, mut lw, mut rw) = (id, wu, wd);
        if l != NONE {
            let ln = &self.t[l as usize];
            agg = self.spec.combine(ln.agg, wu);
            lw = ln.lw;
        }
        if r != NONE {
            let rn = &self.t[r as usize];
            agg = self.spec.combine(agg, self.spec.combine(wd, rn.agg));
            rw = rn.rw;
        }
        let n = &mut self.t[x as usize];
        n.agg = agg;
        n.lw = lw;
        n.rw = rw;
    }

    fn rotate(&mut self, x: u32) {
        let p = self.t[x as usize].par;
        let g = self.t[p as usize].par;
        let d = (self.t[p as usize].ch[1] == x) as usize;
        let b = self.t[x as usize].ch[1 - d];
        if !self.is_root(p) {
            let gd = (self.t[g as usize].ch[1] == p) as usize;
            self.t[g as usize].ch[gd] = x;
        }
        self.t[x as usize].par = g;
        self.t[x as usize].ch[1 - d] = p;
        self.t[p as usize].par = x;
        self.t[p as usize].ch[d] = b;
        if b != NONE {
            self.t[b as usize].par = p;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: u32) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_root(y) {
            y = self.t[y as usize].par;
            stack.push(y);
        }
        for &z in stack.iter().rev() {
            self.push(z);
        }
        while !self.is_root(x) {
            let p = self.t[x as usize].par;
            if !self.is_root(p) {
                let g = self.t[p as usize].par;
                let zigzig = (self.t[g as usize].ch[1] == p) == (self.t[p as usize].ch[1] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    /// Make the root-to-`x` path preferred, ending at `x`; `x` becomes the
    /// root of its auxiliary tree.
    fn access(&mut self, x: u32) {
        let mut last = NONE;
        let mut y = x;
        while y != NONE {
            self.splay(y);
            self.t[y as usize].ch[1] = last;
            self.t[y as usize].wd = if last == NONE { self.spec.identity() } else { self.t[last as usize].lw };
            self.pull(y);
            last = y;
            y = self.t[y as usize].par;
        }
        self.splay(x);
    }

    fn make_root(&mut self, x: u32) {
        self.access(x);
        self.reverse(x);
    }

    fn find_root(&mut self, x: u32) -> u32 {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            let l = self.t[y as usize].ch[0];
            if l == NONE {
                break;
            }
            y = l;
        }
        self.splay(y);
        y
    }

    pub fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        u == v || self.find_root(u) == self.find_root(v)
    }

    pub fn link(&mut self, u: VertexId, v: VertexId, w: S::Value) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(ForestError::SelfLoop(u));
        }
        if self.edges.contains_key(&key(u, v)) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        if self.connected(u, v) {
            return Err(ForestError::Cycle(u, v));
        }
        self.make_root(u);
        self.t[u as usize].par = v;
        self.t[u as usize].wu = w;
        self.pull(u);
        self.edges.insert(key(u, v), w);
        Ok(())
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.edges.remove(&key(u, v)).is_none() {
            return Err(ForestError::MissingEdge(u, v));
        }
        self.make_root(u);
        self.access(v);
        // path is u, v; u is v's whole left subtree
        let id = self.spec.identity();
        self.push(v);
        debug_assert_eq!(self.t[v as usize].ch[0], u);
        self.t[v as usize].ch[0] = NONE;
        self.t[v as usize].wu = id;
        self.t[u as usize].par = NONE;
        self.push(u);
        self.t[u as usize].wd = id;
        self.pull(u);
        self.pull(v);
        Ok(())
    }

    /// Combined weight of the edges on the `u`-`v` path.
    pub fn path_query(&mut self, u: VertexId, v: VertexId) -> Result<S::Value> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.connected(u, v) {
            return Err(ForestError::NotConnected(u, v));
        }
        if u == v {
            return Ok(self.spec.identity());
        }
        self.make_root(u);
        self.access(v);
        Ok(self.t[v as usize].agg)
    }

    /// Rebuild the forest from the preferred-path decomposition and check
    /// it against the edge set, along with every stored aggregate.
    pub fn check(&mut self) -> std::result::Result<(), String> {
        let n = self.t.len() as u32;
        for x in 0..n {
            if self.is_root(x) {
                self.push_all(x);
            }
        }
        let mut found: FxHashMap<(VertexId, VertexId), S::Value> = FxHashMap::default();
        for x in 0..n {
            if !self.is_root(x) {
                continue;
            }
            let mut path = Vec::new();
            self.inorder(x, &mut path);
            for w in path.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (wd, wu) = (self.t[a as usize].wd, self.t[b as usize].wu);
                if wd != wu {
                    return Err(format!("edge {a}-{b} stored as {wd:?} and {wu:?}"));
                }
                found.insert(key(a, b), wu);
            }
            let top = path[0];
            let pp = self.t[x as usize].par;
            if pp != NONE {
                found.insert(key(top, pp), self.t[top as usize].wu);
            }
            let (agg, _) = self.recompute(x);
            if agg != self.t[x as usize].agg {
                return Err(format!("stale aggregate at {x}"));
            }
        }
        if found != self.edges {
            return Err(format!("decomposition has {} edges, forest has {}", found.len(), self.edges.len()));
        }
        Ok(())
    }

    fn push_all(&mut self, x: u32) {
        if x == NONE {
            return;
        }
        self.push(x);
        let [a, b] = self.t[x as usize].ch;
        self.push_all(a);
        self.push_all(b);
    }

    fn inorder(&self, x: u32, out: &mut Vec<u32>) {
        if x == NONE {
            return;
        }
        let [a, b] = self.t[x as usize].ch;
        self.inorder(a, out);
        out.push(x);
        self.inorder(b, out);
    }

    /// (aggregate, node count) of `x`'s subtree from scratch.
    fn recompute(&self, x: u32) -> (S::Value, usize) {
        let mut path = Vec::new();
        self.inorder(x, &mut path);
        let mut agg = self.spec.identity();
        for &b in &path[1..] {
            agg = self.spec.combine(agg, self.t[b as usize].wu);
        }
        (agg, path.len())
    }

    pub fn heap_bytes(&self) -> usize {
        self.t.capacity() * std::mem::size_of::<Node<S::Value>>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{MaxI64, SumI64};

    #[test]
    fn small_path() {
        let mut s = LinkCutTree::new(3, SumI64);
        s.link(0, 1, 5).unwrap();
        s.link(1, 2, 7).unwrap();
        assert_eq!(s.path_query(0, 2).unwrap(), 12);
        assert_eq!(s.path_query(2, 0).unwrap(), 12);
        s.check().unwrap();
        let mut m = LinkCutTree::new(3, MaxI64);
        m.link(0, 1, 5).unwrap();
        m.link(1, 2, 7).unwrap();
        assert_eq!(m.path_query(0, 2).unwrap(), 7);
        assert!(matches!(m.link(0, 2, 1), Err(ForestError::Cycle(..))));
        m.cut(0, 1).unwrap();
        assert!(!m.connected(0, 2));
        assert!(matches!(m.cut(0, 1), Err(ForestError::MissingEdge(..))));
        m.check().unwrap();
    }
}
