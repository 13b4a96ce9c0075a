//! Full structural check, used by tests and validation runs.

use rustc_hash::FxHashMap;

use super::{Hierarchy, Kind, NIL};
use crate::aggregate::AggregateSpec;

fn topo_ok(a: usize, b: usize) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    matches!((lo, hi), (1, 1) | (1, 2) | (2, 2) | (1, 3))
}

impl<S: AggregateSpec> Hierarchy<S> {
    /// Check parent/child links, adjacency, merge rules, maximality,
    /// summaries and rank trees. Returns the first problem found.
    /// Human-readable listing of live clusters, one per line.
    #[doc(hidden)]
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (id, c) in self.cl.iter().enumerate() {
            if !c.alive {
                continue;
            }
            let kids = self.children(id as u32);
            let adj: Vec<u32> = c.adj.iter().map(|(y, _)| y).collect();
            let _ = writeln!(
                out,
                "#{id} l{} p{} center{} kids{:?} adj{:?}",
                c.level,
                c.parent as i32,
                c.center as i32,
                kids.as_slice(),
                adj
            );
        }
        out
    }

    pub fn validate(&self) -> Result<(), String> {
        self.check_links()?;
        self.check_adjacency()?;
        self.check_components()?;
        self.check_merges()?;
        if self.augmented() {
            self.check_summaries()?;
        }
        Ok(())
    }

    fn check_links(&self) -> Result<(), String> {
        let mut live = vec![0usize; self.live.len()];
        for c in self.cl.iter().filter(|c| c.alive) {
            match live.get_mut(c.level as usize) {
                Some(x) => *x += 1,
                None => return Err(format!("cluster above tracked level {}", c.level)),
            }
        }
        if live != self.live {
            return Err(format!("live counts {:?}, scan finds {live:?}", self.live));
        }
        for v in 0..self.n {
            let c = &self.cl[v];
            if !c.alive || c.level != 0 || c.fanout != 0 {
                return Err(format!("leaf {v} malformed"));
            }
        }
        let mut seen_children = 0usize;
        let mut non_roots = 0usize;
        for (i, c) in self.cl.iter().enumerate() {
            if !c.alive {
                continue;
            }
            let i = i as u32;
            if c.parent != NIL {
                non_roots += 1;
                let p = &self.cl[c.parent as usize];
                if !p.alive || p.level != c.level + 1 {
                    return Err(format!("cluster {i} has bad parent {}", c.parent));
                }
            }
            if c.level > 0 && c.fanout == 0 {
                return Err(format!("cluster {i} has no children"));
            }
            let kids = self.children(i);
            if kids.len() != c.fanout as usize {
                return Err(format!("cluster {i} fanout {} but {} children", c.fanout, kids.len()));
            }
            for &k in &kids {
                if self.cl[k as usize].parent != i {
                    return Err(format!("child {k} of {i} points elsewhere"));
                }
            }
            seen_children += kids.len();
            if c.center != NIL && self.cl[c.center as usize].parent != i {
                return Err(format!("center of {i} is not its child"));
            }
        }
        if seen_children != non_roots {
            return Err("child lists do not cover all parented clusters".into());
        }
        Ok(())
    }

    fn check_adjacency(&self) -> Result<(), String> {
        let mut want: FxHashMap<u32, Vec<(u32, u32)>> = FxHashMap::default();
        for (&_, &e) in &self.edge_map {
            let r = &self.edges[e as usize];
            let (cu, cv) = (self.chain(r.u), self.chain(r.v));
            let mut l = 0;
            while l < cu.len() && l < cv.len() && cu[l] != cv[l] {
                want.entry(cu[l]).or_default().push((cv[l], e << 1));
                want.entry(cv[l]).or_default().push((cu[l], (e << 1) | 1));
                l += 1;
            }
        }
        for (i, c) in self.cl.iter().enumerate() {
            if !c.alive {
                continue;
            }
            let mut have: Vec<(u32, u32)> = c.adj.iter().collect();
            have.sort_unstable();
            let mut w = want.remove(&(i as u32)).unwrap_or_default();
            w.sort_unstable();
            if have != w {
                return Err(format!("adjacency of cluster {i} (level {}): have {have:?}, want {w:?}", c.level));
            }
            if (c.adj.degree() > 0) != (c.parent != NIL) {
                return Err(format!("cluster {i} degree {} parent {}", c.adj.degree(), c.parent));
            }
            if self.kind == Kind::Topology && c.adj.degree() > 3 {
                return Err(format!("topology cluster {i} has degree {}", c.adj.degree()));
            }
            if c.adj.degree() >= 3 {
                let mut it = c.adj.iter().map(|(_, er)| self.inside(er));
                let x = it.next().unwrap();
                if it.any(|y| y != x) {
                    return Err(format!("high-degree cluster {i} has several boundary vertices"));
                }
            }
        }
        if let Some((c, _)) = want.into_iter().next() {
            return Err(format!("dead cluster {c} should hold edges"));
        }
        Ok(())
    }

    fn check_components(&self) -> Result<(), String> {
        let mut uf: Vec<u32> = (0..self.n as u32).collect();
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        for r in self.edge_map.values().map(|&e| self.edges[e as usize]) {
            let (a, b) = (find(&mut uf, r.u), find(&mut uf, r.v));
            uf[a as usize] = b;
        }
        let mut root_of_comp: FxHashMap<u32, u32> = FxHashMap::default();
        let mut comp_of_root: FxHashMap<u32, u32> = FxHashMap::default();
        for v in 0..self.n as u32 {
            let comp = find(&mut uf, v);
            let root = self.root_of(v);
            if *root_of_comp.entry(comp).or_insert(root) != root || *comp_of_root.entry(root).or_insert(comp) != comp {
                return Err(format!("vertex {v} root {root} disagrees with connectivity"));
            }
        }
        Ok(())
    }

    fn check_merges(&self) -> Result<(), String> {
        for (i, c) in self.cl.iter().enumerate() {
            if !c.alive || c.fanout < 2 {
                continue;
            }
            let kids = self.children(i as u32);
            match self.kind {
                Kind::Topology => {
                    let (a, b) = (kids[0], kids[1]);
                    if kids.len() != 2 || c.center != NIL {
                        return Err(format!("topology cluster {i} fanout {}", kids.len()));
                    }
                    if self.cl[a as usize].adj.get(b).is_none() || !topo_ok(self.degree(a), self.degree(b)) {
                        return Err(format!("topology cluster {i} merges {a}/{b} illegally"));
                    }
                }
                Kind::Ufo => {
                    if c.center != NIL {
                        let x = c.center;
                        if self.degree(x) < 3 && kids.len() > 2 {
                            return Err(format!("star {i} center degree {}", self.degree(x)));
                        }
                        for &k in &kids {
                            if k != x && (self.degree(k) != 1 || self.cl[k as usize].adj.get(x).is_none()) {
                                return Err(format!("star {i} has bad leaf {k}"));
                            }
                        }
                    } else {
                        let (a, b) = (kids[0], kids[1]);
                        if kids.len() != 2
                            || self.cl[a as usize].adj.get(b).is_none()
                            || self.degree(a) > 2
                            || self.degree(b) > 2
                        {
                            return Err(format!("cluster {i} merges {kids:?} illegally"));
                        }
                    }
                }
            }
        }
        // maximality
        let unmerged = |c: u32| {
            let p = self.cl[c as usize].parent;
            p != NIL && self.cl[p as usize].fanout == 1
        };
        for (i, c) in self.cl.iter().enumerate() {
            let i = i as u32;
            if !c.alive || c.parent == NIL {
                continue;
            }
            let d = c.adj.degree();
            for (y, _) in c.adj.iter() {
                let dy = self.degree(y);
                let bad = match self.kind {
                    Kind::Topology => unmerged(i) && unmerged(y) && topo_ok(d, dy),
                    Kind::Ufo => {
                        (unmerged(i) && unmerged(y) && d <= 2 && dy <= 2)
                            || (d >= 3 && dy == 1 && self.parent(y) != c.parent)
                    }
                };
                if bad {
                    return Err(format!("level {}: {i} (deg {d}) and {y} (deg {dy}) could merge", c.level));
                }
            }
        }
        Ok(())
    }

    fn check_summaries(&self) -> Result<(), String> {
        for (i, c) in self.cl.iter().enumerate() {
            if !c.alive {
                continue;
            }
            let want = self.compute_summary(i as u32);
            if self.summ[i] != want {
                return Err(format!("summary of {i} stale: have {:?}, want {want:?}", self.summ[i]));
            }
        }
        for (&p, rt) in &self.rank {
            let c = &self.cl[p as usize];
            if !c.alive || c.center == NIL {
                return Err(format!("rank tree on non-star {p}"));
            }
            let kids: Vec<u32> = self.children(p).into_iter().filter(|&k| k != c.center).collect();
            if kids.len() != rt.len() {
                return Err(format!("rank tree of {p} has {} leaves, star has {}", rt.len(), kids.len()));
            }
            for k in kids {
                if rt.leaf_acc(k) != Some(&self.leaf_acc(k, c.center)) {
                    return Err(format!("rank tree of {p} has stale leaf {k}"));
                }
            }
            rt.check(&self.spec).map_err(|e| format!("rank tree of {p}: {e}"))?;
        }
        Ok(())
    }

    /// `6 count(l) <= 5 count(l-1)` whenever `count(l-1) >= 2`, and at most
    /// `6n` clusters overall.
    pub fn check_contraction(&self) -> Result<(), String> {
        let counts = self.level_counts();
        for l in 1..counts.len() {
            if counts[l - 1] >= 2 && 6 * counts[l] > 5 * counts[l - 1] {
                return Err(format!("level {l}: {} clusters after {}", counts[l], counts[l - 1]));
            }
        }
        let total: usize = counts.iter().sum();
        if total > 6 * self.n.max(1) {
            return Err(format!("{total} clusters for n = {}", self.n));
        }
        Ok(())
    }
}
