//! Per-cluster augmentations and how children combine into parents.

use rustc_hash::FxHashSet;
use smallvec::SmallVec;

use super::{Hierarchy, NIL};
use crate::aggregate::AggregateSpec;
use crate::batch::Primitives;
use crate::rank_tree::RankTree;
use crate::{VertexId, INF};

/// Aggregates of one cluster.
///
/// `bnd` lists the boundary vertices (at most two, sorted). The path fields
/// describe the cluster path between two boundary vertices and are only
/// meaningful when `nb == 2`. `ecc` and `near` are indexed like `bnd`.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary<V> {
    pub nb: u8,
    pub bnd: [VertexId; 2],
    pub path: V,
    pub plen: u64,
    pub hops: u64,
    pub sub: V,
    pub size: u64,
    pub diam: u64,
    pub ecc: [u64; 2],
    pub near: [u64; 2],
}

impl<V: Copy> Summary<V> {
    pub fn empty<S: AggregateSpec<Value = V>>(spec: &S) -> Self {
        Summary {
            nb: 0,
            bnd: [NIL; 2],
            path: spec.identity(),
            plen: 0,
            hops: 0,
            sub: spec.identity(),
            size: 0,
            diam: 0,
            ecc: [0; 2],
            near: [INF; 2],
        }
    }

    #[inline]
    pub fn slot(&self, x: VertexId) -> Option<usize> {
        (0..self.nb as usize).find(|&i| self.bnd[i] == x)
    }

    #[inline]
    pub fn has(&self, x: VertexId) -> bool {
        self.slot(x).is_some()
    }

    pub fn boundary(&self) -> &[VertexId] {
        &self.bnd[..self.nb as usize]
    }

    #[inline]
    pub fn ecc_at(&self, x: VertexId) -> u64 {
        self.ecc[self.slot(x).expect("not a boundary vertex")]
    }

    #[inline]
    pub fn near_at(&self, x: VertexId) -> u64 {
        self.near[self.slot(x).expect("not a boundary vertex")]
    }
}

/// Aggregate, weighted length and hop count of the path between two
/// boundary vertices of `s` (empty when they coincide).
#[inline]
pub(crate) fn span<S: AggregateSpec>(
    spec: &S,
    s: &Summary<S::Value>,
    x: VertexId,
    y: VertexId,
) -> (S::Value, u64, u64) {
    if x == y {
        (spec.identity(), 0, 0)
    } else {
        debug_assert!(s.nb == 2 && s.has(x) && s.has(y));
        (s.path, s.plen, s.hops)
    }
}

#[inline]
pub(crate) fn sat(a: u64, b: u64) -> u64 {
    a.saturating_add(b)
}

/// Leaves of a star grouped by the center vertex they attach to.
#[derive(Clone, Debug, PartialEq)]
pub struct Group<V> {
    pub x: VertexId,
    pub cnt: u32,
    /// Two largest `edge length + leaf eccentricity` values.
    pub top1: u64,
    pub top2: u64,
    pub near: u64,
    pub sub: V,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarAcc<V> {
    pub groups: SmallVec<[Group<V>; 2]>,
    pub diam: u64,
    pub size: u64,
}

impl<V: Copy> StarAcc<V> {
    pub fn empty() -> Self {
        StarAcc { groups: SmallVec::new(), diam: 0, size: 0 }
    }

    pub fn merge<S: AggregateSpec<Value = V>>(&self, other: &Self, spec: &S) -> Self {
        let mut out = self.clone();
        out.absorb(other, spec);
        out
    }

    pub fn absorb<S: AggregateSpec<Value = V>>(&mut self, other: &Self, spec: &S) {
        self.diam = self.diam.max(other.diam);
        self.size += other.size;
        for g in &other.groups {
            match self.groups.iter_mut().find(|h| h.x == g.x) {
                Some(h) => {
                    h.cnt += g.cnt;
                    let mut t = [h.top1, h.top2, g.top1, g.top2];
                    t.sort_unstable_by(|a, b| b.cmp(a));
                    h.top1 = t[0];
                    h.top2 = t[1];
                    h.near = h.near.min(g.near);
                    h.sub = spec.combine(h.sub, g.sub);
                }
                None => self.groups.push(g.clone()),
            }
        }
    }

    pub fn group(&self, x: VertexId) -> Option<&Group<V>> {
        self.groups.iter().find(|g| g.x == x)
    }
}

impl<S: AggregateSpec> Hierarchy<S> {
    #[inline]
    pub(crate) fn sm(&self, c: u32) -> &Summary<S::Value> {
        &self.summ[c as usize]
    }

    /// Boundary vertices of `c`, read off its adjacency.
    pub(crate) fn boundary_of(&self, c: u32) -> (u8, [VertexId; 2]) {
        let adj = &self.cl[c as usize].adj;
        let mut it = adj.iter();
        let Some((_, e0)) = it.next() else { return (0, [NIL; 2]) };
        let x0 = self.inside(e0);
        if adj.degree() != 2 {
            return (1, [x0, NIL]);
        }
        let x1 = self.inside(it.next().unwrap().1);
        if x1 == x0 {
            (1, [x0, NIL])
        } else {
            (2, [x0.min(x1), x0.max(x1)])
        }
    }

    /// Contribution of leaf `l` of a star centered at `x`.
    pub(crate) fn leaf_acc(&self, l: u32, x: u32) -> StarAcc<S::Value> {
        let er = self.cl[l as usize].adj.get(x).expect("leaf not adjacent to center");
        let (lv, xv) = (self.inside(er), self.outside(er));
        let len = self.edge_len(er);
        let s = self.sm(l);
        let mut acc = StarAcc::empty();
        acc.groups.push(Group {
            x: xv,
            cnt: 1,
            top1: sat(len, s.ecc_at(lv)),
            top2: 0,
            near: sat(len, s.near_at(lv)),
            sub: s.sub,
        });
        acc.diam = s.diam;
        acc.size = s.size;
        acc
    }

    /// Accumulated leaves of star `p`, skipping `skip`.
    pub(crate) fn star_acc(&self, p: u32, skip: u32) -> StarAcc<S::Value> {
        let center = self.cl[p as usize].center;
        if let Some(rt) = self.rank.get(&p) {
            if skip == NIL {
                return rt.total(&self.spec);
            }
            return rt.total_without(skip, &self.spec);
        }
        let mut acc = StarAcc::empty();
        let mut c = self.cl[p as usize].first_child;
        while c != NIL {
            if c != center && c != skip {
                acc.absorb(&self.leaf_acc(c, center), &self.spec);
            }
            c = self.cl[c as usize].next_sib;
        }
        acc
    }

    pub(crate) fn compute_summary(&self, c: u32) -> Summary<S::Value> {
        let spec = &self.spec;
        let full = self.full();
        let mut s = Summary::empty(spec);
        let (nb, bnd) = self.boundary_of(c);
        s.nb = nb;
        s.bnd = bnd;
        let cc = &self.cl[c as usize];
        if cc.level == 0 {
            s.sub = self.values[c as usize];
            s.size = 1;
            s.near = if self.marked[c as usize] { [0; 2] } else { [INF; 2] };
            return s;
        }
        let first = cc.first_child;
        if cc.fanout == 1 {
            let k = self.sm(first);
            if nb == 2 {
                (s.path, s.plen, s.hops) = (k.path, k.plen, k.hops);
            }
            if full {
                s.sub = k.sub;
                s.size = k.size;
                s.diam = k.diam;
                for i in 0..nb as usize {
                    s.ecc[i] = k.ecc_at(bnd[i]);
                    s.near[i] = k.near_at(bnd[i]);
                }
            }
        } else if cc.center != NIL {
            let x = self.sm(cc.center);
            if nb == 2 {
                (s.path, s.plen, s.hops) = (x.path, x.plen, x.hops);
            }
            if full {
                let acc = self.star_acc(c, NIL);
                let tot = acc.groups.iter().fold(spec.identity(), |a, g| spec.combine(a, g.sub));
                s.sub = spec.combine(x.sub, tot);
                s.size = x.size + acc.size;
                let mut diam = x.diam.max(acc.diam);
                for (i, g) in acc.groups.iter().enumerate() {
                    diam = diam.max(sat(g.top1, g.top2.max(x.ecc_at(g.x))));
                    for h in &acc.groups[i + 1..] {
                        let d = span(spec, x, g.x, h.x).1;
                        diam = diam.max(sat(sat(g.top1, d), h.top1));
                    }
                }
                s.diam = diam;
                for i in 0..nb as usize {
                    let p = bnd[i];
                    let (mut e, mut n) = (x.ecc_at(p), x.near_at(p));
                    for g in &acc.groups {
                        let d = span(spec, x, p, g.x).1;
                        e = e.max(sat(d, g.top1));
                        n = n.min(sat(d, g.near));
                    }
                    s.ecc[i] = e;
                    s.near[i] = n;
                }
            }
        } else {
            debug_assert_eq!(cc.fanout, 2);
            let b_id = self.cl[first as usize].next_sib;
            let er = self.cl[first as usize].adj.get(b_id).expect("pair children not adjacent");
            let (a, b) = (self.inside(er), self.outside(er));
            let (w, len) = (self.weight(er), self.edge_len(er));
            let (sa, sb) = (self.sm(first), self.sm(b_id));
            // distance-like data from boundary vertex p of the merged cluster
            let side = |p: VertexId| if sa.has(p) { (sa, a, sb, b) } else { (sb, b, sa, a) };
            if nb == 2 {
                let (p0, p1) = (bnd[0], bnd[1]);
                let (s0, a0, _, _) = side(p0);
                if s0.has(p1) {
                    (s.path, s.plen, s.hops) = span(spec, s0, p0, p1);
                } else {
                    let (o, b0, _, _) = side(p1);
                    let (x1, l1, h1) = span(spec, s0, p0, a0);
                    let (x2, l2, h2) = span(spec, o, b0, p1);
                    s.path = spec.combine(spec.combine(x1, w), x2);
                    s.plen = sat(sat(l1, len), l2);
                    s.hops = h1 + 1 + h2;
                }
            }
            if full {
                s.sub = spec.combine(sa.sub, sb.sub);
                s.size = sa.size + sb.size;
                s.diam = sa.diam.max(sb.diam).max(sat(sat(sa.ecc_at(a), len), sb.ecc_at(b)));
                for i in 0..nb as usize {
                    let p = bnd[i];
                    let (mine, m, other, o) = side(p);
                    let d = sat(span(spec, mine, p, m).1, len);
                    s.ecc[i] = mine.ecc_at(p).max(sat(d, other.ecc_at(o)));
                    s.near[i] = mine.near_at(p).min(sat(d, other.near_at(o)));
                }
            }
        }
        s
    }

    /// Recompute summaries of dirty clusters and all their ancestors,
    /// bottom-up. Rank trees of stars are kept in step.
    pub(crate) fn refresh_summaries<P: Primitives>(&mut self, p: &P) {
        let mut list: Vec<u32> = self.sc.dirty.drain().filter(|&c| self.cl[c as usize].alive).collect();
        let mut seen: FxHashSet<u32> = list.iter().copied().collect();
        let mut k = 0;
        while k < list.len() {
            let q = self.cl[list[k] as usize].parent;
            if q != NIL && seen.insert(q) {
                list.push(q);
            }
            k += 1;
        }
        list.sort_unstable_by_key(|&c| (self.cl[c as usize].level, c));
        if self.cfg.rank_trees {
            for c in list {
                self.refresh_one(c);
            }
            return;
        }
        // one level at a time; clusters of a level only read the level below
        let keyed: Vec<(u32, u32)> = list.iter().map(|&c| (self.cl[c as usize].level, c)).collect();
        for run in keyed.chunk_by(|a, b| a.0 == b.0) {
            let run: Vec<u32> = run.iter().map(|x| x.1).collect();
            let fresh = p.map(&run, |&c| self.compute_summary(c));
            for (&c, s) in run.iter().zip(fresh) {
                self.summ[c as usize] = s;
            }
        }
    }

    pub(crate) fn refresh_one(&mut self, c: u32) {
        if self.cfg.rank_trees && self.full() {
            let cc = &self.cl[c as usize];
            if cc.center != NIL && cc.fanout >= 2 && !self.rank.contains_key(&c) {
                let center = cc.center;
                let mut rt = RankTree::new();
                for l in self.children(c) {
                    if l != center {
                        rt.insert(l, self.sm(l).size, self.leaf_acc(l, center), &self.spec);
                    }
                }
                self.rank.insert(c, rt);
            }
        }
        let s = self.compute_summary(c);
        self.summ[c as usize] = s;
        if !self.rank.is_empty() {
            let p = self.cl[c as usize].parent;
            if p != NIL {
                let center = self.cl[p as usize].center;
                if center != c && self.rank.contains_key(&p) {
                    let acc = self.leaf_acc(c, center);
                    let size = self.sm(c).size;
                    let spec = self.spec.clone();
                    self.rank.get_mut(&p).unwrap().upsert(c, size, acc, &spec);
                }
            }
        }
    }
}
