//! Primitives the batch engine is written against. `Sequential` is the
//! reference; `Parallel` runs on a rayon pool. Both give identical output
//! for identical input.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

const NONE: u32 = u32::MAX;

/// Below this many items the parallel version runs sequentially.
const GRAIN: usize = 2048;

pub trait Primitives: Sync {
    fn threads(&self) -> usize;

    /// Run `f` with this executor's workers available.
    fn install<R: Send, F: FnOnce() -> R + Send>(&self, f: F) -> R;

    fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(&self, xs: &[T], f: F) -> Vec<U>;

    /// Stable grouping of `(key, item)` pairs by key, keys ascending.
    fn group_by_endpoint<T: Copy + Send + Sync>(&self, pairs: Vec<(u32, T)>) -> Vec<(u32, Vec<T>)>;

    /// Apply `f`, drop `u32::MAX` results, sort and deduplicate.
    fn map_and_dedup<F: Fn(u32) -> u32 + Sync + Send>(&self, xs: &[u32], f: F) -> Vec<u32>;

    /// Maximal matching on a disjoint union of paths, given as up to two
    /// neighbor indices per node (`u32::MAX` for none). Each path is ranked
    /// from its smaller-index end and node `2j` is matched with `2j + 1`.
    /// Returns the pairs sorted.
    fn chain_matching(&self, nb: &[[u32; 2]]) -> Vec<(u32, u32)>;

    /// Insert then remove a batch of items.
    fn concurrent_set(&self, set: &mut FxHashSet<u32>, insert: &[u32], remove: &[u32]);
}

fn group_sorted<T: Copy>(pairs: Vec<(u32, T)>) -> Vec<(u32, Vec<T>)> {
    let mut out: Vec<(u32, Vec<T>)> = Vec::new();
    for (k, t) in pairs {
        match out.last_mut() {
            Some((lk, v)) if *lk == k => v.push(t),
            _ => out.push((k, vec![t])),
        }
    }
    out
}

fn degree(e: &[u32; 2]) -> usize {
    e.iter().filter(|&&x| x != NONE).count()
}

/// Reference implementation of every primitive.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Primitives for Sequential {
    fn threads(&self) -> usize {
        1
    }

    fn install<R: Send, F: FnOnce() -> R + Send>(&self, f: F) -> R {
        f()
    }

    fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(&self, xs: &[T], f: F) -> Vec<U> {
        xs.iter().map(f).collect()
    }

    fn group_by_endpoint<T: Copy + Send + Sync>(&self, mut pairs: Vec<(u32, T)>) -> Vec<(u32, Vec<T>)> {
        pairs.sort_by_key(|p| p.0);
        group_sorted(pairs)
    }

    fn map_and_dedup<F: Fn(u32) -> u32 + Sync + Send>(&self, xs: &[u32], f: F) -> Vec<u32> {
        let mut v: Vec<u32> = xs.iter().map(|&x| f(x)).filter(|&y| y != NONE).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn chain_matching(&self, nb: &[[u32; 2]]) -> Vec<(u32, u32)> {
        let mut seen = vec![false; nb.len()];
        let mut out = Vec::new();
        let mut path = Vec::new();
        for s in 0..nb.len() {
            if seen[s] || degree(&nb[s]) != 1 {
                continue;
            }
            path.clear();
            let (mut prev, mut x) = (NONE, s as u32);
            while x != NONE {
                seen[x as usize] = true;
                path.push(x);
                let next = nb[x as usize].iter().copied().find(|&y| y != NONE && y != prev).unwrap_or(NONE);
                prev = x;
                x = next;
            }
            if path[0] > *path.last().unwrap() {
                path.reverse();
            }
            out.extend(path.chunks_exact(2).map(|c| (c[0], c[1])));
        }
        debug_assert!(nb.iter().enumerate().all(|(i, e)| seen[i] || degree(e) == 0), "cycle among chains");
        out.sort_unstable();
        out
    }

    fn concurrent_set(&self, set: &mut FxHashSet<u32>, insert: &[u32], remove: &[u32]) {
        set.extend(insert.iter().copied());
        for x in remove {
            set.remove(x);
        }
    }
}

/// Fork-join implementation on a dedicated rayon pool.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn new(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("failed to start thread pool");
        Parallel { pool }
    }
}

impl Primitives for Parallel {
    fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn install<R: Send, F: FnOnce() -> R + Send>(&self, f: F) -> R {
        self.pool.install(f)
    }

    fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(&self, xs: &[T], f: F) -> Vec<U> {
        if xs.len() < GRAIN {
            return xs.iter().map(f).collect();
        }
        xs.par_iter().with_min_len(GRAIN / 4).map(f).collect()
    }

    fn group_by_endpoint<T: Copy + Send + Sync>(&self, mut pairs: Vec<(u32, T)>) -> Vec<(u32, Vec<T>)> {
        pairs.par_sort_by_key(|p| p.0);
        group_sorted(pairs)
    }

    fn map_and_dedup<F: Fn(u32) -> u32 + Sync + Send>(&self, xs: &[u32], f: F) -> Vec<u32> {
        let mut v: Vec<u32> = if xs.len() < GRAIN {
            xs.iter().map(|&x| f(x)).filter(|&y| y != NONE).collect()
        } else {
            xs.par_iter().map(|&x| f(x)).filter(|&y| y != NONE).collect()
        };
        v.par_sort_unstable();
        v.dedup();
        v
    }

    fn chain_matching(&self, nb: &[[u32; 2]]) -> Vec<(u32, u32)> {
        if nb.len() < GRAIN {
            return Sequential.chain_matching(nb);
        }
        // Arc 2x+s runs from x to nb[x][s]. Pointer jumping finds, for every
        // arc, the path end it leads to and how many arcs that takes.
        let m = nb.len() * 2;
        let succ = |a: usize| -> u32 {
            let (x, s) = (a / 2, a % 2);
            let y = nb[x][s];
            if y == NONE {
                return NONE;
            }
            match nb[y as usize] {
                [p, q] if p == x as u32 && q != NONE => 2 * y + 1,
                [p, q] if q == x as u32 && p != NONE => 2 * y,
                _ => NONE,
            }
        };
        let mut next: Vec<u32> = (0..m).into_par_iter().map(succ).collect();
        let mut dist: Vec<u32> = vec![1; m];
        let mut end: Vec<u32> = (0..m)
            .into_par_iter()
            .map(|a| if next[a] == NONE { nb[a / 2][a % 2] } else { NONE })
            .collect();
        while next.par_iter().any(|&b| b != NONE) {
            let step: Vec<(u32, u32, u32)> = (0..m)
                .into_par_iter()
                .map(|a| {
                    let b = next[a];
                    if b == NONE {
                        (NONE, dist[a], end[a])
                    } else {
                        let b = b as usize;
                        (next[b], dist[a] + dist[b], end[b])
                    }
                })
                .collect();
            for (a, (n, d, e)) in step.into_iter().enumerate() {
                next[a] = n;
                dist[a] = d;
                end[a] = e;
            }
        }
        let mut out: Vec<(u32, u32)> = (0..nb.len())
            .into_par_iter()
            .filter_map(|x| {
                let e = nb[x];
                let xi = x as u32;
                let (idx, succ) = match (e[0] != NONE, e[1] != NONE) {
                    (false, false) => return None,
                    (true, true) => {
                        let (e0, e1) = (end[2 * x], end[2 * x + 1]);
                        if e0 < e1 {
                            (dist[2 * x], e[1])
                        } else {
                            (dist[2 * x + 1], e[0])
                        }
                    }
                    (a, _) => {
                        let s = if a { 0 } else { 1 };
                        if xi < end[2 * x + s] {
                            (0, e[s])
                        } else {
                            return None;
                        }
                    }
                };
                (idx % 2 == 0).then_some((xi, succ))
            })
            .collect();
        out.par_sort_unstable();
        out
    }

    fn concurrent_set(&self, set: &mut FxHashSet<u32>, insert: &[u32], remove: &[u32]) {
        let ins = self.map_and_dedup(insert, |x| x);
        let del = self.map_and_dedup(remove, |x| x);
        set.reserve(ins.len());
        set.extend(ins);
        for x in del {
            set.remove(&x);
        }
    }
}
