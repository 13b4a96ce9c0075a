//! Ternarization: serve an arbitrary-degree forest with a structure that
//! needs degree at most 3.
//!
//! Every original vertex owns a path of surrogate slots. An end slot of a
//! longer path can hold two original edges, an interior slot one, and a lone
//! slot three. Path edges are fake and carry the spec's `bottom` value. The
//! vertex value and mark live on one slot, the representative.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::hierarchy::Config;
use crate::trees::TopologyTree;
use crate::VertexId;

const NONE: u32 = u32::MAX;

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// One change to the surrogate forest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurrogateOp<V> {
    Link(u32, u32, V),
    Cut(u32, u32),
    /// The representative of an original vertex moved between slots.
    Move(VertexId, u32, u32),
}

impl<V> SurrogateOp<V> {
    pub fn is_edge_update(&self) -> bool {
        !matches!(self, SurrogateOp::Move(..))
    }
}

/// Mapping from an original forest to its surrogate forest on `2n` slots.
#[derive(Clone, Debug)]
pub struct TernaryMap<V> {
    n: usize,
    bottom: V,
    owner: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    /// Other endpoints of the original edges held by each slot.
    held: Vec<SmallVec<[VertexId; 3]>>,
    head: Vec<u32>,
    tail: Vec<u32>,
    len: Vec<u32>,
    rep: Vec<u32>,
    free: Vec<u32>,
    /// Original edge -> (slot of the smaller endpoint, slot of the larger, weight).
    edges: FxHashMap<(VertexId, VertexId), (u32, u32, V)>,
}

impl<V: Copy> TernaryMap<V> {
    pub fn new(n: usize, bottom: V) -> Self {
        let m = 2 * n;
        let mut owner = vec![NONE; m];
        for (v, o) in owner.iter_mut().enumerate().take(n) {
            *o = v as u32;
        }
        TernaryMap {
            n,
            bottom,
            owner,
            next: vec![NONE; m],
            prev: vec![NONE; m],
            held: vec![SmallVec::new(); m],
            head: (0..n as u32).collect(),
            tail: (0..n as u32).collect(),
            len: vec![1; n],
            rep: (0..n as u32).collect(),
            free: (n as u32..m as u32).rev().collect(),
            edges: FxHashMap::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of slots the surrogate forest has room for.
    pub fn capacity(&self) -> usize {
        2 * self.n
    }

    /// Slots currently in use.
    pub fn surrogates(&self) -> usize {
        2 * self.n - self.free.len()
    }

    pub fn rep(&self, v: VertexId) -> u32 {
        self.rep[v as usize]
    }

    /// Original vertex owning slot `s`, if the slot is in use.
    pub fn owner(&self, s: u32) -> Option<VertexId> {
        let o = self.owner[s as usize];
        (o != NONE).then_some(o)
    }

    /// Slots of `v` in path order.
    pub fn slots(&self, v: VertexId) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len[v as usize] as usize);
        let mut s = self.head[v as usize];
        while s != NONE {
            out.push(s);
            s = self.next[s as usize];
        }
        out
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&key(u, v))
    }

    /// Surrogate endpoints `(slot of u, slot of v)` carrying original edge `(u, v)`.
    pub fn carrier(&self, u: VertexId, v: VertexId) -> Option<(u32, u32)> {
        let &(a, b, _) = self.edges.get(&key(u, v))?;
        Some(if u < v { (a, b) } else { (b, a) })
    }

    pub fn degree(&self, s: u32) -> usize {
        let s = s as usize;
        (self.prev[s] != NONE) as usize + (self.next[s] != NONE) as usize + self.held[s].len()
    }

    fn room(&self, s: u32) -> bool {
        self.degree(s) < 3
    }

    fn set_carrier(&mut self, x: VertexId, y: VertexId, s: u32) {
        let e = self.edges.get_mut(&key(x, y)).expect("held edge is mapped");
        if x < y {
            e.0 = s;
        } else {
            e.1 = s;
        }
    }

    fn slot_of(&self, x: VertexId, y: VertexId) -> u32 {
        let &(a, b, _) = &self.edges[&key(x, y)];
        if x < y {
            a
        } else {
            b
        }
    }

    /// A slot of `x` with room for one more original edge, growing the
    /// path at its tail if both ends are full.
    fn slot_with_room(&mut self, x: VertexId, ops: &mut Vec<SurrogateOp<V>>) -> u32 {
        let (h, t) = (self.head[x as usize], self.tail[x as usize]);
        if self.room(t) {
            return t;
        }
        if self.room(h) {
            return h;
        }
        let s = self.free.pop().expect("surrogate pool exhausted");
        self.owner[s as usize] = x;
        // hand one of the tail's edges to the new slot so the tail can
        // take the path edge
        let y = self.held[t as usize].pop().expect("full slot holds an edge");
        let sy = self.slot_of(y, x);
        let w = self.edges[&key(x, y)].2;
        ops.push(SurrogateOp::Cut(t, sy));
        ops.push(SurrogateOp::Link(s, sy, w));
        self.held[s as usize].push(y);
        self.set_carrier(x, y, s);
        self.next[t as usize] = s;
        self.prev[s as usize] = t;
        self.tail[x as usize] = s;
        self.len[x as usize] += 1;
        ops.push(SurrogateOp::Link(t, s, self.bottom));
        s
    }

    /// Splice slot `s` of `x` out of its path if it holds no edge and is
    /// not the only slot.
    fn shrink(&mut self, x: VertexId, s: u32, ops: &mut Vec<SurrogateOp<V>>) {
        if !self.held[s as usize].is_empty() || self.len[x as usize] == 1 {
            return;
        }
        let (p, q) = (self.prev[s as usize], self.next[s as usize]);
        if p != NONE {
            ops.push(SurrogateOp::Cut(p, s));
            self.next[p as usize] = q;
        } else {
            self.head[x as usize] = q;
        }
        if q != NONE {
            ops.push(SurrogateOp::Cut(s, q));
            self.prev[q as usize] = p;
        } else {
            self.tail[x as usize] = p;
        }
        if p != NONE && q != NONE {
            ops.push(SurrogateOp::Link(p, q, self.bottom));
        }
        if self.rep[x as usize] == s {
            let to = if p != NONE { p } else { q };
            ops.push(SurrogateOp::Move(x, s, to));
            self.rep[x as usize] = to;
        }
        self.len[x as usize] -= 1;
        self.prev[s as usize] = NONE;
        self.next[s as usize] = NONE;
        self.owner[s as usize] = NONE;
        self.free.push(s);
    }

    /// Record original edge `(u, v)`. The caller guarantees it is new and
    /// joins two components.
    pub fn link(&mut self, u: VertexId, v: VertexId, w: V) -> Vec<SurrogateOp<V>> {
        debug_assert!(!self.has_edge(u, v));
        let mut ops = Vec::new();
        let su = self.slot_with_room(u, &mut ops);
        let sv = self.slot_with_room(v, &mut ops);
        self.held[su as usize].push(v);
        self.held[sv as usize].push(u);
        let (a, b) = if u < v { (su, sv) } else { (sv, su) };
        self.edges.insert(key(u, v), (a, b, w));
        ops.push(SurrogateOp::Link(su, sv, w));
        ops
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<Vec<SurrogateOp<V>>> {
        let (su, sv) = self.carrier(u, v).ok_or(ForestError::MissingEdge(u, v))?;
        self.edges.remove(&key(u, v));
        self.held[su as usize].retain(|y| *y != v);
        self.held[sv as usize].retain(|y| *y != u);
        let mut ops = vec![SurrogateOp::Cut(su, sv)];
        self.shrink(u, su, &mut ops);
        self.shrink(v, sv, &mut ops);
        Ok(ops)
    }

    /// Every surrogate edge, real and fake.
    pub fn surrogate_edges(&self) -> Vec<(u32, u32, V)> {
        let mut out: Vec<(u32, u32, V)> = self.edges.values().copied().collect();
        for s in 0..2 * self.n {
            let q = self.next[s];
            if q != NONE {
                out.push((s as u32, q, self.bottom));
            }
        }
        out
    }

    pub fn heap_bytes(&self) -> usize {
        let per_slot = 3 * 4 + std::mem::size_of::<SmallVec<[VertexId; 3]>>();
        let per_vertex = 4 * 4;
        let e = std::mem::size_of::<((VertexId, VertexId), (u32, u32, V))>() + 1;
        2 * self.n * per_slot + self.n * per_vertex + self.free.capacity() * 4 + self.edges.capacity() * e
    }
}

/// A topology tree over the surrogate forest, answering queries about the
/// original forest.
pub struct TernarizedTopology<S: AggregateSpec> {
    map: TernaryMap<S::Value>,
    tree: TopologyTree<S>,
    last_ops: usize,
    last_touched: u64,
}

impl<S: AggregateSpec> TernarizedTopology<S> {
    pub fn new(n: usize, spec: S, cfg: Config) -> Self {
        let map = TernaryMap::new(n, spec.bottom());
        TernarizedTopology { map, tree: TopologyTree::new(2 * n, spec, cfg), last_ops: 0, last_touched: 0 }
    }

    /// Build over an acyclic edge list.
    pub fn build(n: usize, edges: &[(VertexId, VertexId, S::Value)], spec: S, cfg: Config) -> Result<Self> {
        let mut t = Self::new(n, spec, cfg);
        let mut uf: Vec<u32> = (0..n as u32).collect();
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        for &(u, v, w) in edges {
            t.check_new(u, v)?;
            let (a, b) = (find(&mut uf, u), find(&mut uf, v));
            if a == b {
                return Err(ForestError::Cycle(u, v));
            }
            uf[a as usize] = b;
            t.map.link(u, v, w);
        }
        t.tree.build_from(&t.map.surrogate_edges())?;
        Ok(t)
    }

    fn check_new(&self, u: VertexId, v: VertexId) -> Result<()> {
        for x in [u, v] {
            if x as usize >= self.map.n() {
                return Err(ForestError::OutOfRange(x));
            }
        }
        if u == v {
            return Err(ForestError::SelfLoop(u));
        }
        if self.map.has_edge(u, v) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        Ok(())
    }

    fn apply(&mut self, ops: &[SurrogateOp<S::Value>]) {
        self.last_touched = 0;
        for op in ops {
            match *op {
                SurrogateOp::Link(a, b, w) => {
                    self.tree.link(a, b, w).expect("surrogate link");
                    self.last_touched += self.tree.last_stats().touched;
                }
                SurrogateOp::Cut(a, b) => {
                    self.tree.cut(a, b).expect("surrogate cut");
                    self.last_touched += self.tree.last_stats().touched;
                }
                SurrogateOp::Move(_, from, to) => {
                    let x = self.tree.value(from);
                    let m = self.tree.is_marked(from);
                    let id = self.tree.spec().identity();
                    self.tree.set_value(from, id);
                    self.tree.mark(from, false);
                    self.tree.set_value(to, x);
                    self.tree.mark(to, m);
                }
            }
        }
        self.last_ops = ops.iter().filter(|o| o.is_edge_update()).count();
    }

    pub fn link(&mut self, u: VertexId, v: VertexId, w: S::Value) -> Result<()> {
        self.check_new(u, v)?;
        if self.connected(u, v) {
            return Err(ForestError::Cycle(u, v));
        }
        let ops = self.map.link(u, v, w);
        self.apply(&ops);
        Ok(())
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        for x in [u, v] {
            if x as usize >= self.map.n() {
                return Err(ForestError::OutOfRange(x));
            }
        }
        let ops = self.map.cut(u, v)?;
        self.apply(&ops);
        Ok(())
    }

    /// Surrogate edge updates issued by the last link or cut.
    pub fn last_ops(&self) -> usize {
        self.last_ops
    }

    /// Clusters touched by the surrogate updates of the last link or cut.
    pub fn last_touched(&self) -> u64 {
        self.last_touched
    }

    pub fn map(&self) -> &TernaryMap<S::Value> {
        &self.map
    }

    pub fn tree(&self) -> &TopologyTree<S> {
        &self.tree
    }

    fn r(&self, v: VertexId) -> u32 {
        self.map.rep(v)
    }

    pub fn set_value(&mut self, v: VertexId, x: S::Value) {
        let s = self.r(v);
        self.tree.set_value(s, x);
    }

    pub fn mark(&mut self, v: VertexId, on: bool) {
        let s = self.r(v);
        self.tree.mark(s, on);
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.tree.connected(self.r(u), self.r(v))
    }

    pub fn path_query(&self, u: VertexId, v: VertexId) -> Result<S::Value> {
        self.tree.path_query(self.r(u), self.r(v)).map_err(|_| ForestError::NotConnected(u, v))
    }

    pub fn subtree_query(&self, v: VertexId, p: VertexId) -> Result<S::Value> {
        let (sv, sp) = self.map.carrier(v, p).ok_or(ForestError::MissingEdge(v, p))?;
        self.tree.subtree_query(sv, sp)
    }

    pub fn lca(&self, u: VertexId, v: VertexId, r: VertexId) -> Result<VertexId> {
        let s = self.tree.lca(self.r(u), self.r(v), self.r(r)).map_err(|_| ForestError::NotConnected(u, v))?;
        Ok(self.map.owner(s).expect("median lies on a used slot"))
    }

    /// Weighted diameter of `v`'s component; fake edges have length 0.
    pub fn diameter(&self, v: VertexId) -> u64 {
        self.tree.diameter(self.r(v))
    }

    pub fn nearest_marked(&self, v: VertexId) -> u64 {
        self.tree.nearest_marked(self.r(v))
    }

    pub fn height(&self) -> u32 {
        self.tree.height()
    }

    pub fn heap_bytes(&self) -> usize {
        self.tree.heap_bytes() + self.map.heap_bytes()
    }
}
