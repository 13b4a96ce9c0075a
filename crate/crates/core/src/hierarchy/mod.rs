//! Contraction hierarchy shared by UFO trees and topology trees.
//!
//! Level 0 holds one leaf cluster per vertex (cluster id == vertex id).
//! A cluster at level `l` keeps the level-`l` edges leaving it; an edge is
//! present at level `l` exactly when the level-`l` ancestors of its two
//! endpoints both exist and differ. The structural primitives below keep
//! that invariant, cascading upward immediately or, in batch mode, by
//! queueing work for the level above.

mod adj;
pub(crate) mod query;
pub(crate) mod summary;
pub(crate) mod update;
pub(crate) mod validate;

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::rank_tree::RankTree;
use crate::VertexId;

pub(crate) use adj::Adj;
pub use summary::Summary;

pub(crate) const NIL: u32 = u32::MAX;

/// Merge policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Topology,
    Ufo,
}

/// Which cluster augmentations are maintained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Augment {
    /// Connectivity only.
    None,
    /// Boundary vertices and cluster paths: path queries and LCA.
    Path,
    /// Everything: adds subtree, diameter and nearest-marked data.
    Full,
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub augment: Augment,
    /// Keep star child sets in rank trees (non-invertible subtree queries
    /// in logarithmic time).
    pub rank_trees: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { augment: Augment::Full, rank_trees: false }
    }
}

impl Config {
    pub fn connectivity() -> Self {
        Config { augment: Augment::None, rank_trees: false }
    }
    pub fn path() -> Self {
        Config { augment: Augment::Path, rank_trees: false }
    }
    pub fn full() -> Self {
        Config::default()
    }
    pub fn ranked() -> Self {
        Config { augment: Augment::Full, rank_trees: true }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Cluster {
    pub parent: u32,
    pub first_child: u32,
    pub next_sib: u32,
    pub prev_sib: u32,
    pub fanout: u32,
    /// High-degree child of a star merge, else NIL.
    pub center: u32,
    pub level: u32,
    pub alive: bool,
    pub adj: Adj,
}

impl Cluster {
    fn new(level: u32) -> Self {
        Cluster {
            parent: NIL,
            first_child: NIL,
            next_sib: NIL,
            prev_sib: NIL,
            fanout: 0,
            center: NIL,
            level,
            alive: true,
            adj: Adj::default(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeRec<V> {
    pub u: VertexId,
    pub v: VertexId,
    pub w: V,
}

/// Counters for one update, used to check locality bounds.
#[derive(Clone, Debug, Default)]
pub struct UpdateStats {
    /// Distinct root clusters seen per level.
    pub roots_per_level: Vec<u32>,
    /// Clusters freed per level.
    pub deletions_per_level: Vec<u32>,
    /// Largest degree of a root cluster when it was reclustered.
    pub max_root_degree: usize,
    /// Clusters with degree >= 3 or fanout >= 3 freed by the ancestor walk.
    pub high_deletions: u32,
    /// Stars dissolved because their center lost its high degree.
    pub dissolved: u32,
    /// Clusters created, deleted, or whose adjacency changed.
    pub touched: u64,
    /// `touched` split by level.
    pub touched_per_level: Vec<u64>,
    /// Batch updates only: sum of root degrees per level.
    pub root_degree_per_level: Vec<u64>,
}

impl UpdateStats {
    fn bump(v: &mut Vec<u32>, level: u32) {
        let l = level as usize;
        if v.len() <= l {
            v.resize(l + 1, 0);
        }
        v[l] += 1;
    }
}

/// Per-update scratch state.
#[derive(Default, Debug)]
pub(crate) struct Scratch {
    pub roots: Vec<Vec<u32>>,
    pub queued: FxHashSet<u32>,
    pub dirty: FxHashSet<u32>,
    /// Clusters per level that lost an adjacency entry.
    pub shrunk: Vec<Vec<u32>>,
}

impl Scratch {
    fn at<T>(v: &mut Vec<Vec<T>>, level: u32) -> &mut Vec<T> {
        let l = level as usize;
        if v.len() <= l {
            v.resize_with(l + 1, Vec::new);
        }
        &mut v[l]
    }
}

pub struct Hierarchy<S: AggregateSpec> {
    pub(crate) kind: Kind,
    pub(crate) spec: S,
    pub(crate) cfg: Config,
    pub(crate) n: usize,
    pub(crate) cl: Vec<Cluster>,
    pub(crate) free: Vec<u32>,
    pub(crate) dead: Vec<u32>,
    pub(crate) edges: Vec<EdgeRec<S::Value>>,
    pub(crate) edge_free: Vec<u32>,
    pub(crate) edge_map: FxHashMap<(VertexId, VertexId), u32>,
    pub(crate) values: Vec<S::Value>,
    pub(crate) marked: Vec<bool>,
    pub(crate) summ: Vec<Summary<S::Value>>,
    pub(crate) rank: FxHashMap<u32, RankTree<S::Value>>,
    pub(crate) sc: Scratch,
    pub(crate) stats: UpdateStats,
    /// Live clusters per level.
    pub(crate) live: Vec<usize>,
}

#[inline]
fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl<S: AggregateSpec> Hierarchy<S> {
    pub fn new(n: usize, spec: S, kind: Kind, cfg: Config) -> Self {
        let id = spec.identity();
        let mut h = Hierarchy {
            kind,
            spec,
            cfg,
            n,
            cl: (0..n).map(|_| Cluster::new(0)).collect(),
            free: Vec::new(),
            dead: Vec::new(),
            edges: Vec::new(),
            edge_free: Vec::new(),
            edge_map: FxHashMap::default(),
            values: vec![id; n],
            marked: vec![false; n],
            summ: Vec::new(),
            rank: FxHashMap::default(),
            sc: Scratch::default(),
            stats: UpdateStats::default(),
            live: vec![n],
        };
        if h.augmented() {
            h.summ = (0..n).map(|_| Summary::empty(&h.spec)).collect();
            for v in 0..n as u32 {
                h.summ[v as usize] = h.compute_summary(v);
            }
        }
        h
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn config(&self) -> Config {
        self.cfg
    }

    pub fn spec(&self) -> &S {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edge_map.len()
    }

    #[inline]
    pub(crate) fn augmented(&self) -> bool {
        self.cfg.augment != Augment::None
    }

    #[inline]
    pub(crate) fn full(&self) -> bool {
        self.cfg.augment == Augment::Full
    }

    pub fn last_stats(&self) -> &UpdateStats {
        &self.stats
    }

    // ---- small accessors -------------------------------------------------

    #[inline]
    pub(crate) fn parent(&self, c: u32) -> u32 {
        self.cl[c as usize].parent
    }

    #[inline]
    pub(crate) fn level(&self, c: u32) -> u32 {
        self.cl[c as usize].level
    }

    #[inline]
    pub(crate) fn degree(&self, c: u32) -> usize {
        self.cl[c as usize].adj.degree()
    }

    #[inline]
    pub(crate) fn fanout(&self, c: u32) -> u32 {
        self.cl[c as usize].fanout
    }

    pub(crate) fn nbrs(&self, c: u32) -> SmallVec<[(u32, u32); 4]> {
        self.cl[c as usize].adj.iter().collect()
    }

    pub(crate) fn children(&self, c: u32) -> SmallVec<[u32; 4]> {
        let mut out = SmallVec::new();
        let mut x = self.cl[c as usize].first_child;
        while x != NIL {
            out.push(x);
            x = self.cl[x as usize].next_sib;
        }
        out
    }

    /// Vertex of edge ref `er` lying inside the cluster that holds it.
    #[inline]
    pub(crate) fn inside(&self, er: u32) -> VertexId {
        let e = &self.edges[(er >> 1) as usize];
        if er & 1 == 0 {
            e.u
        } else {
            e.v
        }
    }

    #[inline]
    pub(crate) fn outside(&self, er: u32) -> VertexId {
        self.inside(er ^ 1)
    }

    #[inline]
    pub(crate) fn weight(&self, er: u32) -> S::Value {
        self.edges[(er >> 1) as usize].w
    }

    #[inline]
    pub(crate) fn edge_len(&self, er: u32) -> u64 {
        self.spec.length(self.weight(er))
    }

    pub(crate) fn edge_id(&self, u: VertexId, v: VertexId) -> Option<u32> {
        self.edge_map.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.degree(v)
    }

    pub fn root_of(&self, v: VertexId) -> u32 {
        let mut c = v;
        while self.cl[c as usize].parent != NIL {
            c = self.cl[c as usize].parent;
        }
        c
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.root_of(u) == self.root_of(v)
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId, S::Value)> {
        let mut out: Vec<_> = self
            .edge_map
            .values()
            .map(|&e| {
                let r = &self.edges[e as usize];
                let (a, b) = key(r.u, r.v);
                (a, b, r.w)
            })
            .collect();
        out.sort_by_key(|x| (x.0, x.1));
        out
    }

    /// Level of the highest component root.
    pub fn height(&self) -> u32 {
        self.live.iter().rposition(|&c| c > 0).unwrap_or(0) as u32
    }

    /// Number of live clusters per level.
    pub fn level_counts(&self) -> Vec<usize> {
        self.live[..=self.height() as usize].to_vec()
    }

    pub fn cluster_count(&self) -> usize {
        self.live.iter().sum()
    }

    /// Bytes owned by the structure: pool slots, overflow neighbor maps,
    /// edge table, per-vertex data, summaries and rank trees.
    pub fn heap_bytes(&self) -> usize {
        use std::mem::size_of;
        let mut b = self.cl.len() * size_of::<Cluster>();
        b += self.cl.iter().map(|c| c.adj.heap_bytes()).sum::<usize>();
        b += (self.free.len() + self.dead.len()) * 4;
        b += self.edges.len() * size_of::<EdgeRec<S::Value>>();
        b += self.edge_free.len() * 4;
        b += self.edge_map.capacity() * (size_of::<((u32, u32), u32)>() + 1);
        b += self.values.len() * size_of::<S::Value>() + self.marked.len();
        b += self.summ.len() * size_of::<Summary<S::Value>>();
        b += self.rank.values().map(|r| r.heap_bytes()).sum::<usize>();
        b
    }

    // ---- bookkeeping -----------------------------------------------------

    #[inline]
    pub(crate) fn touch(&mut self, c: u32) {
        self.stats.touched += 1;
        let l = self.cl[c as usize].level as usize;
        let t = &mut self.stats.touched_per_level;
        if t.len() <= l {
            t.resize(l + 1, 0);
        }
        t[l] += 1;
        if self.augmented() {
            self.sc.dirty.insert(c);
        }
    }

    /// Record `c` as a root awaiting reclustering at its level.
    pub(crate) fn queue_root(&mut self, c: u32) {
        if self.cl[c as usize].parent != NIL || !self.sc.queued.insert(c) {
            return;
        }
        let l = self.level(c);
        UpdateStats::bump(&mut self.stats.roots_per_level, l);
        Scratch::at(&mut self.sc.roots, l).push(c);
    }

    pub(crate) fn new_cluster(&mut self, level: u32) -> u32 {
        let c = match self.free.pop() {
            Some(c) => {
                self.cl[c as usize] = Cluster::new(level);
                c
            }
            None => {
                self.cl.push(Cluster::new(level));
                if self.augmented() {
                    self.summ.push(Summary::empty(&self.spec));
                }
                (self.cl.len() - 1) as u32
            }
        };
        let l = level as usize;
        if self.live.len() <= l {
            self.live.resize(l + 1, 0);
        }
        self.live[l] += 1;
        self.touch(c);
        self.queue_root(c);
        c
    }

    // ---- adjacency -------------------------------------------------------

    fn put_pair(&mut self, a: u32, b: u32, er: u32) {
        self.cl[a as usize].adj.insert(b, er);
        self.cl[b as usize].adj.insert(a, er ^ 1);
        self.touch(a);
        self.touch(b);
        self.queue_root(a);
        self.queue_root(b);
    }

    fn take_pair(&mut self, a: u32, b: u32) -> Option<u32> {
        let er = self.cl[a as usize].adj.remove(b)?;
        self.cl[b as usize].adj.remove(a);
        self.touch(a);
        self.touch(b);
        let l = self.level(a);
        let v = Scratch::at(&mut self.sc.shrunk, l);
        v.push(a);
        v.push(b);
        Some(er)
    }

    /// Add the edge `er` (held by `a`) between `a` and `b` and at every
    /// level above where the ancestors exist and differ.
    pub(crate) fn link_up(&mut self, mut a: u32, mut b: u32, er: u32) {
        loop {
            if self.cl[a as usize].adj.get(b).is_some() {
                return;
            }
            self.put_pair(a, b, er);
            let (pa, pb) = (self.parent(a), self.parent(b));
            if pa == NIL || pb == NIL || pa == pb {
                return;
            }
            a = pa;
            b = pb;
        }
    }

    /// Remove the edge between `a` and `b` and its copies above.
    pub(crate) fn unlink_up(&mut self, mut a: u32, mut b: u32) {
        let Some(er) = self.take_pair(a, b) else { return };
        loop {
            let (pa, pb) = (self.parent(a), self.parent(b));
            if pa == NIL || pb == NIL || pa == pb {
                return;
            }
            if self.cl[pa as usize].adj.get(pb).map(|x| x >> 1) != Some(er >> 1) {
                return;
            }
            self.take_pair(pa, pb);
            a = pa;
            b = pb;
        }
    }

    // ---- parent/child structure -----------------------------------------

    pub(crate) fn attach(&mut self, c: u32, p: u32) {
        debug_assert_eq!(self.parent(c), NIL);
        debug_assert_eq!(self.level(c) + 1, self.level(p));
        let head = self.cl[p as usize].first_child;
        {
            let x = &mut self.cl[c as usize];
            x.parent = p;
            x.prev_sib = NIL;
            x.next_sib = head;
        }
        if head != NIL {
            self.cl[head as usize].prev_sib = c;
        }
        self.cl[p as usize].first_child = c;
        self.cl[p as usize].fanout += 1;
        self.touch(p);
        self.touch(c);
        for (d, er) in self.nbrs(c) {
            let dp = self.parent(d);
            if dp != NIL && dp != p {
                self.link_up(p, dp, er);
            }
        }
    }

    pub(crate) fn detach(&mut self, c: u32) {
        let p = self.parent(c);
        if p == NIL {
            return;
        }
        for (d, _) in self.nbrs(c) {
            let dp = self.parent(d);
            if dp != NIL && dp != p {
                self.unlink_up(p, dp);
            }
        }
        let (prev, next) = (self.cl[c as usize].prev_sib, self.cl[c as usize].next_sib);
        if prev != NIL {
            self.cl[prev as usize].next_sib = next;
        } else {
            self.cl[p as usize].first_child = next;
        }
        if next != NIL {
            self.cl[next as usize].prev_sib = prev;
        }
        let pc = &mut self.cl[p as usize];
        pc.fanout -= 1;
        if pc.center == c {
            pc.center = NIL;
            self.rank.remove(&p);
        } else if let Some(rt) = self.rank.get_mut(&p) {
            rt.remove(c, &self.spec);
        }
        let x = &mut self.cl[c as usize];
        x.parent = NIL;
        x.prev_sib = NIL;
        x.next_sib = NIL;
        self.touch(p);
        self.touch(c);
    }

    /// Free `c`: drop its edges (and their copies above), orphan its
    /// children and unhook it from its parent.
    pub(crate) fn delete_cluster(&mut self, c: u32) {
        for (d, _) in self.nbrs(c) {
            self.unlink_up(c, d);
        }
        let p = self.parent(c);
        if p != NIL {
            self.detach(c);
        }
        let mut x = self.cl[c as usize].first_child;
        while x != NIL {
            let next = self.cl[x as usize].next_sib;
            let xc = &mut self.cl[x as usize];
            xc.parent = NIL;
            xc.prev_sib = NIL;
            xc.next_sib = NIL;
            self.touch(x);
            self.queue_root(x);
            x = next;
        }
        self.rank.remove(&c);
        let l = self.level(c);
        UpdateStats::bump(&mut self.stats.deletions_per_level, l);
        self.live[l as usize] -= 1;
        let cc = &mut self.cl[c as usize];
        cc.alive = false;
        cc.first_child = NIL;
        cc.fanout = 0;
        cc.center = NIL;
        cc.adj.clear();
        self.touch(c);
        self.sc.dirty.remove(&c);
        self.dead.push(c);
    }

    pub(crate) fn set_center(&mut self, p: u32, c: u32) {
        if self.cl[p as usize].center != c {
            self.cl[p as usize].center = c;
            self.rank.remove(&p);
            self.touch(p);
        }
    }

    // ---- edges -----------------------------------------------------------

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(ForestError::OutOfRange(v))
        }
    }

    pub(crate) fn new_edge(&mut self, u: VertexId, v: VertexId, w: S::Value) -> u32 {
        let rec = EdgeRec { u, v, w };
        let e = match self.edge_free.pop() {
            Some(e) => {
                self.edges[e as usize] = rec;
                e
            }
            None => {
                self.edges.push(rec);
                (self.edges.len() - 1) as u32
            }
        };
        self.edge_map.insert(key(u, v), e);
        e
    }

    pub(crate) fn drop_edge(&mut self, e: u32) {
        let r = self.edges[e as usize];
        self.edge_map.remove(&key(r.u, r.v));
        self.edge_free.push(e);
    }

    /// Validate a single link against the current forest.
    pub(crate) fn check_link(&self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(ForestError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(ForestError::DuplicateEdge(u, v));
        }
        if self.connected(u, v) {
            return Err(ForestError::Cycle(u, v));
        }
        if self.kind == Kind::Topology {
            for x in [u, v] {
                if self.degree(x) >= 3 {
                    return Err(ForestError::Degree(x, 3));
                }
            }
        }
        Ok(())
    }

    // ---- update scaffolding ----------------------------------------------

    pub(crate) fn begin_update(&mut self) {
        self.stats = UpdateStats::default();
        self.sc.roots.clear();
        self.sc.queued.clear();
        self.sc.dirty.clear();
        self.sc.shrunk.iter_mut().for_each(Vec::clear);
    }

    /// Refresh summaries of everything touched and release freed slots.
    pub(crate) fn end_update(&mut self) {
        self.end_update_with(&crate::batch::Sequential);
    }

    pub(crate) fn end_update_with<P: crate::batch::Primitives>(&mut self, p: &P) {
        if self.augmented() {
            self.refresh_summaries(p);
        }
        self.free.append(&mut self.dead);
        self.sc.roots.clear();
        self.sc.queued.clear();
    }

    pub fn set_value(&mut self, v: VertexId, x: S::Value) {
        self.values[v as usize] = x;
        self.begin_update();
        self.touch(v);
        self.end_update();
    }

    pub fn value(&self, v: VertexId) -> S::Value {
        self.values[v as usize]
    }

    pub fn mark(&mut self, v: VertexId, on: bool) {
        self.marked[v as usize] = on;
        self.begin_update();
        self.touch(v);
        self.end_update();
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v as usize]
    }
}
