//! Sequential link and cut.

use super::{Hierarchy, Kind, NIL};
use crate::aggregate::AggregateSpec;
use crate::error::{ForestError, Result};
use crate::VertexId;
use rustc_hash::FxHashSet;

fn topo_allowed(a: usize, b: usize) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    matches!((lo, hi), (1, 1) | (1, 2) | (2, 2) | (1, 3))
}

impl<S: AggregateSpec> Hierarchy<S> {
    pub fn link(&mut self, u: VertexId, v: VertexId, w: S::Value) -> Result<()> {
        self.check_link(u, v)?;
        self.begin_update();
        self.delete_ancestors(u);
        self.delete_ancestors(v);
        let e = self.new_edge(u, v, w);
        self.link_up(u, v, e << 1);
        self.after_edge_change(u, v);
        Ok(())
    }

    pub fn cut(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = self.edge_id(u, v).ok_or(ForestError::MissingEdge(u, v))?;
        self.begin_update();
        self.delete_ancestors(u);
        self.delete_ancestors(v);
        self.unlink_up(u, v);
        self.drop_edge(e);
        self.after_edge_change(u, v);
        Ok(())
    }

    fn after_edge_change(&mut self, u: VertexId, v: VertexId) {
        self.queue_root(u);
        self.queue_root(v);
        self.recluster();
        self.end_update();
    }

    /// Walk up from `c`, freeing ancestors that no longer need to exist.
    ///
    /// Topology trees free every ancestor. UFO trees keep clusters of high
    /// degree or high fanout and instead cut the low-degree child on the
    /// walk loose from them.
    pub(crate) fn delete_ancestors(&mut self, c: u32) {
        self.delete_ancestors_from(c, None);
    }

    /// As `delete_ancestors`, but stops at a cluster already in `seen`
    /// once nothing below it changed, so walks from many endpoints share
    /// their common part.
    pub(crate) fn delete_ancestors_from(&mut self, c: u32, mut seen: Option<&mut FxHashSet<u32>>) {
        let mut prev = c;
        let mut prev_deleted = false;
        let mut curr = self.parent(c);
        while curr != NIL {
            let next = self.parent(curr);
            let first = seen.as_mut().is_none_or(|s| s.insert(curr));
            let (deg, fan) = (self.degree(curr), self.fanout(curr));
            if self.kind == Kind::Topology || (deg < 3 && fan < 3) {
                if self.kind == Kind::Ufo && (deg >= 3 || fan >= 3) {
                    self.stats.high_deletions += 1;
                }
                self.delete_cluster(curr);
                prev_deleted = true;
            } else {
                let loose = !prev_deleted && self.degree(prev) <= 2;
                let changed = prev_deleted || loose;
                prev_deleted = false;
                if loose && self.cl[curr as usize].center == prev {
                    // a star cannot outlive its center
                    self.delete_cluster(curr);
                    self.stats.dissolved += 1;
                    prev_deleted = true;
                } else {
                    if loose {
                        self.detach(prev);
                        self.queue_root(prev);
                    }
                    if !first && !changed {
                        return;
                    }
                }
            }
            prev = curr;
            curr = next;
        }
    }

    /// A kept cluster may lose degree without being on an endpoint's
    /// chain, when a neighbor is freed or an edge is cut. A star with two or
    /// more leaves around a low-degree center is not a legal merge, and a
    /// lone low-degree child may now be able to pair up, so such parents
    /// are dissolved before level `i` is reclustered.
    pub(crate) fn repair_level(&mut self, i: u32) {
        let Some(v) = self.sc.shrunk.get_mut(i as usize) else { return };
        let list = std::mem::take(v);
        for c in list {
            if !self.cl[c as usize].alive || self.degree(c) >= 3 {
                continue;
            }
            let p = self.parent(c);
            if p == NIL {
                continue;
            }
            let f = self.fanout(p);
            if (self.cl[p as usize].center == c && f >= 3) || f == 1 {
                self.dissolve(p);
            }
        }
    }

    fn dissolve(&mut self, p: u32) {
        let q = self.parent(p);
        let was_center = q != NIL && self.cl[q as usize].center == p;
        self.delete_cluster(p);
        self.stats.dissolved += 1;
        if was_center {
            self.dissolve(q);
        } else if q != NIL && self.fanout(q) == 0 {
            self.dissolve(q);
        }
    }

    #[inline]
    pub(crate) fn live_root(&self, x: u32, level: u32) -> bool {
        let c = &self.cl[x as usize];
        c.alive && c.parent == NIL && c.level == level && c.adj.degree() > 0
    }

    /// Whether `y` already shares its parent with a sibling.
    #[inline]
    pub(crate) fn merges(&self, y: u32) -> bool {
        let q = self.parent(y);
        q != NIL && self.fanout(q) >= 2
    }

    fn recluster(&mut self) {
        let mut i = 0;
        while i < self.sc.roots.len().max(self.sc.shrunk.len()) {
            if i >= self.sc.roots.len() {
                self.sc.roots.resize_with(i + 1, Vec::new);
            }
            if self.kind == Kind::Ufo {
                self.repair_level(i as u32);
            }
            if !self.sc.roots[i].is_empty() {
                match self.kind {
                    Kind::Ufo => self.recluster_ufo(i as u32),
                    Kind::Topology => self.recluster_topo(i as u32),
                }
                self.give_singletons(i as u32);
            }
            i += 1;
        }
    }

    fn root_at(&self, i: u32, k: usize) -> Option<u32> {
        self.sc.roots[i as usize].get(k).copied()
    }

    fn recluster_ufo(&mut self, i: u32) {
        // high-degree roots take a star parent and absorb degree-1 neighbors
        let mut k = 0;
        while let Some(x) = self.root_at(i, k) {
            k += 1;
            if !self.live_root(x, i) {
                continue;
            }
            let d = self.degree(x);
            self.stats.max_root_degree = self.stats.max_root_degree.max(d);
            if d < 3 {
                continue;
            }
            self.make_star(x, i);
        }
        for want in [2usize, 1] {
            let mut k = 0;
            while let Some(x) = self.root_at(i, k) {
                k += 1;
                if !self.live_root(x, i) || self.degree(x) != want {
                    continue;
                }
                if want == 2 {
                    self.match_two(x, i);
                } else {
                    self.match_one(x, i);
                }
            }
        }
    }

    /// Give high-degree root `x` a star parent holding all of its degree-1
    /// neighbors.
    pub(crate) fn make_star(&mut self, x: u32, i: u32) {
        let p = self.new_cluster(i + 1);
        self.attach(x, p);
        self.set_center(p, x);
        for (y, _) in self.nbrs(x) {
            if self.degree(y) != 1 {
                continue;
            }
            if self.parent(y) != NIL {
                self.delete_ancestors(y);
            }
            if self.parent(y) != NIL {
                self.detach(y);
            }
            self.attach(y, p);
        }
    }

    /// Whether root `x` may merge with its neighbor `y` right now.
    pub(crate) fn can_join(&self, x: u32, y: u32) -> bool {
        let (dx, dy) = (self.degree(x), self.degree(y));
        let q = self.parent(y);
        let single = q == NIL || self.fanout(q) == 1;
        match self.kind {
            Kind::Topology => single && topo_allowed(dx, dy),
            Kind::Ufo => match dx {
                1 => single || (dy >= 3 && self.cl[q as usize].center == y),
                2 => single && dy <= 2,
                _ => false,
            },
        }
    }

    /// Merge root `x` with `y`, given `can_join(x, y)`.
    pub(crate) fn do_join(&mut self, x: u32, y: u32, i: u32) {
        let q = self.parent(y);
        if self.kind == Kind::Ufo && q != NIL && self.fanout(q) >= 2 {
            self.delete_ancestors(q);
            self.attach(x, q);
            return;
        }
        self.join(x, y, i);
        if self.kind == Kind::Ufo && self.degree(y) >= 3 {
            let q = self.parent(y);
            self.set_center(q, y);
        }
    }

    fn match_two(&mut self, x: u32, i: u32) {
        for (y, _) in self.nbrs(x) {
            if self.degree(y) <= 2 && !self.merges(y) {
                self.join(x, y, i);
                return;
            }
        }
    }

    fn match_one(&mut self, x: u32, i: u32) {
        let (y, _) = self.cl[x as usize].adj.first().unwrap();
        let q = self.parent(y);
        let high = self.degree(y) >= 3;
        if q == NIL || !self.merges(y) {
            self.join(x, y, i);
            if high {
                let q = self.parent(y);
                self.set_center(q, y);
            }
        } else if high {
            // y is the center of a star; x becomes one more leaf
            self.delete_ancestors(q);
            self.attach(x, q);
        }
    }

    /// Merge root `x` with unmerged `y`: join y's singleton parent, or
    /// create a new parent for both.
    fn join(&mut self, x: u32, y: u32, i: u32) {
        let q = self.parent(y);
        if q != NIL {
            self.delete_ancestors(q);
            self.attach(x, q);
        } else {
            let p = self.new_cluster(i + 1);
            self.attach(y, p);
            self.attach(x, p);
        }
    }

    fn recluster_topo(&mut self, i: u32) {
        let mut k = 0;
        while let Some(x) = self.root_at(i, k) {
            k += 1;
            if !self.live_root(x, i) {
                continue;
            }
            let dx = self.degree(x);
            self.stats.max_root_degree = self.stats.max_root_degree.max(dx);
            for (y, _) in self.nbrs(x) {
                if !topo_allowed(dx, self.degree(y)) {
                    continue;
                }
                let q = self.parent(y);
                if q == NIL || self.fanout(q) == 1 {
                    self.join(x, y, i);
                    break;
                }
            }
        }
    }

    pub(crate) fn give_singletons(&mut self, i: u32) {
        let mut k = 0;
        while let Some(x) = self.root_at(i, k) {
            k += 1;
            if !self.live_root(x, i) {
                continue;
            }
            let p = self.new_cluster(i + 1);
            self.attach(x, p);
            if self.kind == Kind::Ufo && self.degree(x) >= 3 {
                self.set_center(p, x);
            }
        }
    }
}
