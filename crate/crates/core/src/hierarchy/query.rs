//! Queries answered by ascending from leaf clusters.

use smallvec::{smallvec, SmallVec};

use super::summary::{sat, span};
use super::{Augment, Hierarchy, NIL};
use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::{VertexId, INF};

/// Path data from a query vertex to each boundary vertex of the current
/// cluster: `(boundary vertex, aggregate, length, hops)`.
type St<V> = SmallVec<[(VertexId, V, u64, u64); 2]>;

fn look<V: Copy>(st: &St<V>, x: VertexId) -> (V, u64, u64) {
    let e = st.iter().find(|e| e.0 == x).expect("vertex missing from ascent state");
    (e.1, e.2, e.3)
}

enum Seg {
    Up { t: VertexId, h: u64 },
    Edge { far: VertexId },
    CPath { c: u32, x: VertexId, y: VertexId, h: u64 },
    Down { b: VertexId, h: u64 },
}

impl<S: AggregateSpec> Hierarchy<S> {
    fn need(&self, a: Augment) {
        let ok = match a {
            Augment::None => true,
            Augment::Path => self.cfg.augment != Augment::None,
            Augment::Full => self.cfg.augment == Augment::Full,
        };
        assert!(ok, "query needs {a:?} augmentation");
    }

    /// Ancestors of leaf `v`, indexed by level.
    pub(crate) fn chain(&self, v: VertexId) -> Vec<u32> {
        let mut out = vec![v];
        let mut c = v;
        while self.cl[c as usize].parent != NIL {
            c = self.cl[c as usize].parent;
            out.push(c);
        }
        out
    }

    /// Lowest level at which the two chains meet (both end at one root).
    fn meet(a: &[u32], b: &[u32]) -> usize {
        debug_assert_eq!(a.last(), b.last());
        let mut l = a.len() - 1;
        while l > 0 && a[l - 1] == b[l - 1] {
            l -= 1;
        }
        l
    }

    /// The sibling of `c` in a pair merge and the connecting edge ref, held
    /// by `c`.
    fn partner(&self, c: u32, p: u32) -> (u32, u32) {
        let mut k = self.cl[p as usize].first_child;
        if k == c {
            k = self.cl[c as usize].next_sib;
        }
        (k, self.cl[c as usize].adj.get(k).expect("pair children not adjacent"))
    }

    fn leaf_state(&self, v: VertexId) -> St<S::Value> {
        if self.sm(v).nb == 0 {
            SmallVec::new()
        } else {
            smallvec![(v, self.spec.identity(), 0, 0)]
        }
    }

    /// Extend path data from child `c` to its parent `p`.
    fn step(&self, c: u32, p: u32, st: &St<S::Value>) -> St<S::Value> {
        let spec = &self.spec;
        let pc = &self.cl[p as usize];
        let mut out = St::new();
        for &x in self.sm(p).boundary() {
            let e = if pc.fanout == 1 || pc.center == c || (pc.center == NIL && self.sm(c).has(x)) {
                look(st, x)
            } else {
                let (k, er) = if pc.center != NIL {
                    (pc.center, self.cl[c as usize].adj.get(pc.center).unwrap())
                } else {
                    self.partner(c, p)
                };
                let (a, l, h) = look(st, self.inside(er));
                let (pa, pl, ph) = span(spec, self.sm(k), self.outside(er), x);
                (
                    spec.combine(spec.combine(a, self.weight(er)), pa),
                    sat(sat(l, self.edge_len(er)), pl),
                    h + 1 + ph,
                )
            };
            out.push((x, e.0, e.1, e.2));
        }
        out
    }

    /// Ascent states of `v` for levels `0..=top`.
    fn states(&self, chain: &[u32], top: usize) -> Vec<St<S::Value>> {
        let mut out = Vec::with_capacity(top + 1);
        out.push(self.leaf_state(chain[0]));
        for l in 0..top {
            let s = self.step(chain[l], chain[l + 1], &out[l]);
            out.push(s);
        }
        out
    }

    /// Aggregate, length and hop count of the u-v path.
    pub fn path_info(&self, u: VertexId, v: VertexId) -> Result<(S::Value, u64, u64)> {
        self.need(Augment::Path);
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok((self.spec.identity(), 0, 0));
        }
        let (cu, cv) = (self.chain(u), self.chain(v));
        if cu.last() != cv.last() {
            return Err(ForestError::NotConnected(u, v));
        }
        let l = Self::meet(&cu, &cv);
        let su = self.states(&cu, l - 1);
        let sv = self.states(&cv, l - 1);
        let (a, b) = (cu[l - 1], cv[l - 1]);
        let (su, sv) = (&su[l - 1], &sv[l - 1]);
        let spec = &self.spec;
        let cat = |x: (S::Value, u64, u64), er: u32, y: (S::Value, u64, u64)| {
            (
                spec.combine(spec.combine(x.0, self.weight(er)), y.0),
                sat(sat(x.1, self.edge_len(er)), y.1),
                x.2 + 1 + y.2,
            )
        };
        let center = self.cl[cu[l] as usize].center;
        Ok(if center == NIL {
            let er = self.cl[a as usize].adj.get(b).unwrap();
            cat(look(su, self.inside(er)), er, look(sv, self.outside(er)))
        } else if a == center {
            let er = self.cl[b as usize].adj.get(a).unwrap();
            cat(look(su, self.outside(er)), er, look(sv, self.inside(er)))
        } else if b == center {
            let er = self.cl[a as usize].adj.get(b).unwrap();
            cat(look(su, self.inside(er)), er, look(sv, self.outside(er)))
        } else {
            let ea = self.cl[a as usize].adj.get(center).unwrap();
            let eb = self.cl[b as usize].adj.get(center).unwrap();
            let mid = span(spec, self.sm(center), self.outside(ea), self.outside(eb));
            let left = cat(look(su, self.inside(ea)), ea, mid);
            cat(left, eb, look(sv, self.inside(eb)))
        })
    }

    pub fn path_query(&self, u: VertexId, v: VertexId) -> Result<S::Value> {
        Ok(self.path_info(u, v)?.0)
    }

    pub fn hops(&self, u: VertexId, v: VertexId) -> Result<u64> {
        Ok(self.path_info(u, v)?.2)
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<u64> {
        Ok(self.path_info(u, v)?.1)
    }

    /// Combine of vertex values on v's side of the edge (v, p).
    pub fn subtree_query(&self, v: VertexId, p: VertexId) -> Result<S::Value> {
        self.need(Augment::Full);
        self.check_vertex(v)?;
        self.check_vertex(p)?;
        if !self.has_edge(v, p) {
            return Err(ForestError::MissingEdge(v, p));
        }
        let spec = &self.spec;
        let (cv, cp) = (self.chain(v), self.chain(p));
        let l = Self::meet(&cv, &cp);
        let (a, b, top) = (cv[l - 1], cp[l - 1], cv[l]);
        let mut acc = self.sm(a).sub;
        // boundary vertices of the current cluster that lie on v's side
        let mut side: SmallVec<[(VertexId, bool); 2]> = SmallVec::new();
        let center = self.cl[top as usize].center;
        if center != NIL && a == center {
            acc = spec.combine(acc, self.leaves_sub(top, b));
            side.extend(self.sm(top).boundary().iter().map(|&x| (x, true)));
        } else {
            for &x in self.sm(top).boundary() {
                side.push((x, self.sm(a).has(x)));
            }
        }
        for lev in l..cv.len() - 1 {
            let (c, par) = (cv[lev], cv[lev + 1]);
            let pc = &self.cl[par as usize];
            let ins = |x: VertexId| side.iter().any(|&(y, f)| y == x && f);
            let mut next: SmallVec<[(VertexId, bool); 2]> = SmallVec::new();
            if pc.fanout == 1 {
                for &x in self.sm(par).boundary() {
                    next.push((x, ins(x)));
                }
            } else if pc.center == c {
                let x = self.sm(c);
                if x.boundary().iter().all(|&y| ins(y)) {
                    acc = spec.combine(acc, self.leaves_sub(par, NIL));
                } else {
                    for g in &self.star_acc(par, NIL).groups {
                        if ins(g.x) {
                            acc = spec.combine(acc, g.sub);
                        }
                    }
                }
                for &y in self.sm(par).boundary() {
                    next.push((y, ins(y)));
                }
            } else if pc.center != NIL {
                let er = self.cl[c as usize].adj.get(pc.center).unwrap();
                let joined = ins(self.inside(er));
                if joined {
                    acc = spec.combine(acc, self.all_but(par, c));
                }
                for &y in self.sm(par).boundary() {
                    next.push((y, joined));
                }
            } else {
                let (k, er) = self.partner(c, par);
                let joined = ins(self.inside(er));
                if joined {
                    acc = spec.combine(acc, self.sm(k).sub);
                }
                for &y in self.sm(par).boundary() {
                    next.push((y, if self.sm(c).has(y) { ins(y) } else { joined }));
                }
            }
            side = next;
        }
        Ok(acc)
    }

    /// Combine of the leaves of star `p`, except `skip`.
    fn leaves_sub(&self, p: u32, skip: u32) -> S::Value {
        let spec = &self.spec;
        let center = self.cl[p as usize].center;
        if spec.invertible() && self.rank.is_empty() {
            let all = spec.inverse(self.sm(p).sub, self.sm(center).sub).unwrap();
            if skip == NIL {
                return all;
            }
            return spec.inverse(all, self.sm(skip).sub).unwrap();
        }
        self.star_acc(p, skip).groups.iter().fold(spec.identity(), |a, g| spec.combine(a, g.sub))
    }

    /// Combine over every child of `p` except `c`.
    fn all_but(&self, p: u32, c: u32) -> S::Value {
        let spec = &self.spec;
        if spec.invertible() {
            return spec.inverse(self.sm(p).sub, self.sm(c).sub).unwrap();
        }
        let center = self.cl[p as usize].center;
        spec.combine(self.sm(center).sub, self.leaves_sub(p, c))
    }

    /// Longest path in v's component.
    pub fn diameter(&self, v: VertexId) -> u64 {
        self.need(Augment::Full);
        self.sm(self.root_of(v)).diam
    }

    /// Distance from v to the closest marked vertex, or `INF`.
    pub fn nearest_marked(&self, v: VertexId) -> u64 {
        self.need(Augment::Full);
        let spec = &self.spec;
        let chain = self.chain(v);
        let mut best = if self.marked[v as usize] { 0 } else { INF };
        let mut st: SmallVec<[(VertexId, u64); 2]> = SmallVec::new();
        if self.sm(v).nb > 0 {
            st.push((v, 0));
        }
        let d = |st: &SmallVec<[(VertexId, u64); 2]>, x: VertexId| st.iter().find(|e| e.0 == x).unwrap().1;
        for lev in 0..chain.len() - 1 {
            let (c, p) = (chain[lev], chain[lev + 1]);
            let pc = &self.cl[p as usize];
            let mut next = SmallVec::new();
            if pc.fanout == 1 || pc.center == c {
                if pc.center == c && pc.fanout > 1 {
                    for g in &self.star_acc(p, NIL).groups {
                        best = best.min(sat(d(&st, g.x), g.near));
                    }
                }
                for &x in self.sm(p).boundary() {
                    next.push((x, d(&st, x)));
                }
            } else if pc.center != NIL {
                let xs = self.sm(pc.center);
                let er = self.cl[c as usize].adj.get(pc.center).unwrap();
                let at = self.outside(er);
                let t = sat(d(&st, self.inside(er)), self.edge_len(er));
                best = best.min(sat(t, xs.near_at(at)));
                for g in &self.star_acc(p, NIL).groups {
                    best = best.min(sat(sat(t, span(spec, xs, at, g.x).1), g.near));
                }
                for &x in self.sm(p).boundary() {
                    next.push((x, sat(t, span(spec, xs, at, x).1)));
                }
            } else {
                let (k, er) = self.partner(c, p);
                let ks = self.sm(k);
                let t = sat(d(&st, self.inside(er)), self.edge_len(er));
                let b = self.outside(er);
                best = best.min(sat(t, ks.near_at(b)));
                for &x in self.sm(p).boundary() {
                    let dx = if self.sm(c).has(x) { d(&st, x) } else { sat(t, span(spec, ks, b, x).1) };
                    next.push((x, dx));
                }
            }
            st = next;
        }
        best
    }

    /// Lowest common ancestor of u and v when the tree is rooted at r.
    pub fn lca(&self, u: VertexId, v: VertexId, r: VertexId) -> Result<VertexId> {
        self.need(Augment::Path);
        for (x, y) in [(u, v), (u, r)] {
            self.check_vertex(y)?;
            if !self.connected(x, y) {
                return Err(ForestError::NotConnected(x, y));
            }
        }
        // the LCA is the median of u, v and r
        let duv = self.hops(u, v)?;
        let dur = self.hops(u, r)?;
        let dvr = self.hops(v, r)?;
        self.locate(u, v, (duv + dur - dvr) / 2)
    }

    /// Vertex at hop distance k from u on the path towards v.
    pub fn locate(&self, u: VertexId, v: VertexId, k: u64) -> Result<VertexId> {
        self.need(Augment::Path);
        if k == 0 {
            return Ok(u);
        }
        let (cu, cv) = (self.chain(u), self.chain(v));
        if cu.last() != cv.last() {
            return Err(ForestError::NotConnected(u, v));
        }
        let l = Self::meet(&cu, &cv);
        let su = self.states(&cu, l - 1);
        let sv = self.states(&cv, l - 1);
        let (a, b, top) = (cu[l - 1], cv[l - 1], cu[l]);
        let hu = |x| look(&su[l - 1], x).2;
        let hv = |x| look(&sv[l - 1], x).2;
        let center = self.cl[top as usize].center;
        let mut segs: SmallVec<[Seg; 5]> = SmallVec::new();
        let (ea, eb) = if center == NIL {
            let er = self.cl[a as usize].adj.get(b).unwrap();
            (er, er ^ 1)
        } else if a == center {
            let er = self.cl[b as usize].adj.get(a).unwrap();
            (er ^ 1, er)
        } else if b == center {
            let er = self.cl[a as usize].adj.get(b).unwrap();
            (er, er ^ 1)
        } else {
            (self.cl[a as usize].adj.get(center).unwrap(), self.cl[b as usize].adj.get(center).unwrap())
        };
        let (ta, tb) = (self.inside(ea), self.inside(eb));
        segs.push(Seg::Up { t: ta, h: hu(ta) });
        if center != NIL && a != center && b != center {
            let (xa, xb) = (self.outside(ea), self.outside(eb));
            segs.push(Seg::Edge { far: xa });
            let h = span(&self.spec, self.sm(center), xa, xb).2;
            segs.push(Seg::CPath { c: center, x: xa, y: xb, h });
        }
        segs.push(Seg::Edge { far: tb });
        segs.push(Seg::Down { b: tb, h: hv(tb) });
        let mut rem = k;
        for s in segs {
            let h = match s {
                Seg::Up { h, .. } | Seg::CPath { h, .. } | Seg::Down { h, .. } => h,
                Seg::Edge { .. } => 1,
            };
            if rem > h {
                rem -= h;
                continue;
            }
            return Ok(match s {
                Seg::Up { t, .. } => self.descend(&cu, &su, l - 1, t, rem),
                Seg::Edge { far } => far,
                Seg::CPath { c, x, y, .. } => self.cpath_locate(c, x, y, rem),
                Seg::Down { b, h } => self.descend(&cv, &sv, l - 1, b, h - rem),
            });
        }
        Err(ForestError::NotConnected(u, v))
    }

    /// Inside the level-`lev` ancestor of a query vertex q, the vertex at
    /// hop distance k from q towards boundary vertex t.
    fn descend(&self, chain: &[u32], sts: &[St<S::Value>], mut lev: usize, mut t: VertexId, mut k: u64) -> VertexId {
        loop {
            if lev == 0 {
                return chain[0];
            }
            let (c, p) = (chain[lev - 1], chain[lev]);
            let pc = &self.cl[p as usize];
            let st = &sts[lev - 1];
            if pc.fanout == 1 || pc.center == c || (pc.center == NIL && self.sm(c).has(t)) {
                lev -= 1;
                continue;
            }
            let (other, er) = if pc.center != NIL {
                (pc.center, self.cl[c as usize].adj.get(pc.center).unwrap())
            } else {
                self.partner(c, p)
            };
            let a = self.inside(er);
            let d = look(st, a).2;
            if k <= d {
                t = a;
                lev -= 1;
                continue;
            }
            k -= d + 1;
            return self.cpath_locate(other, self.outside(er), t, k);
        }
    }

    /// Vertex at hop distance k from x on the path to y, both boundary
    /// vertices of cluster c (or equal).
    fn cpath_locate(&self, mut c: u32, mut x: VertexId, mut y: VertexId, mut k: u64) -> VertexId {
        loop {
            if k == 0 {
                return x;
            }
            let cc = &self.cl[c as usize];
            if cc.level == 0 {
                return c;
            }
            if cc.fanout == 1 {
                c = cc.first_child;
                continue;
            }
            if cc.center != NIL {
                c = cc.center;
                continue;
            }
            let a = cc.first_child;
            let b = self.cl[a as usize].next_sib;
            let (first, second) = if self.sm(a).has(x) { (a, b) } else { (b, a) };
            if self.sm(first).has(y) {
                c = first;
                continue;
            }
            let er = self.cl[first as usize].adj.get(second).unwrap();
            let fa = self.inside(er);
            let d = span(&self.spec, self.sm(first), x, fa).2;
            if k <= d {
                c = first;
                y = fa;
            } else {
                k -= d + 1;
                c = second;
                x = self.outside(er);
            }
        }
    }
}
