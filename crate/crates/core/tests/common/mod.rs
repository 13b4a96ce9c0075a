#![allow(dead_code)]

use dynforest::{AggregateSpec, Hierarchy, OracleForest, SumI64, Update, VertexId, INF};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid link or cut on the oracle's current forest.
pub enum Op {
    Link(VertexId, VertexId, i64),
    Cut(VertexId, VertexId),
}

pub fn random_op<S: AggregateSpec>(o: &OracleForest<S>, r: &mut ChaCha8Rng, max_deg: usize, link_bias: f64) -> Option<Op> {
    let n = o.n() as u32;
    if n < 2 {
        return None;
    }
    let want_link = o.num_edges() == 0 || (o.num_edges() + 1 < n as usize && r.gen_bool(link_bias));
    if want_link {
        for _ in 0..50 {
            let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
            if u != v && o.degree(u) < max_deg && o.degree(v) < max_deg && !o.connected(u, v) {
                return Some(Op::Link(u, v, r.gen_range(-5..20)));
            }
        }
    }
    let edges = o.edges();
    if edges.is_empty() {
        return None;
    }
    let (u, v, _) = edges[r.gen_range(0..edges.len())];
    Some(Op::Cut(u, v))
}

/// Compare every query kind at a sample of vertices.
pub fn compare_queries<S>(h: &Hierarchy<S>, o: &OracleForest<S>, r: &mut ChaCha8Rng, samples: usize, full: bool) -> Result<(), String>
where
    S: AggregateSpec,
{
    let n = o.n() as u32;
    for _ in 0..samples {
        let (u, v, w) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        let c = o.connected(u, v);
        if h.connected(u, v) != c {
            return Err(format!("connected({u},{v})"));
        }
        if c {
            let a = h.path_query(u, v).map_err(|e| e.to_string())?;
            let b = o.path_aggregate(u, v).unwrap();
            if a != b {
                return Err(format!("path({u},{v}) = {a:?}, want {b:?}"));
            }
            if o.connected(u, w) {
                let a = h.lca(u, v, w).map_err(|e| e.to_string())?;
                let b = o.lca(u, v, w).unwrap();
                if a != b {
                    return Err(format!("lca({u},{v},{w}) = {a}, want {b}"));
                }
            }
        }
        if full {
            if h.diameter(u) != o.diameter(u) {
                return Err(format!("diameter({u}) = {}, want {}", h.diameter(u), o.diameter(u)));
            }
            let (a, b) = (h.nearest_marked(u), o.nearest_marked(u));
            if a != b {
                return Err(format!("nearest({u}) = {a}, want {b}"));
            }
            let nb: Vec<_> = o.neighbors(u).collect();
            if let Some(&(p, _)) = nb.first() {
                let a = h.subtree_query(u, p).map_err(|e| e.to_string())?;
                let b = o.subtree_aggregate(u, p).unwrap();
                if a != b {
                    return Err(format!("subtree({u},{p}) = {a:?}, want {b:?}"));
                }
            }
        }
    }
    let _ = INF;
    Ok(())
}

/// A random valid batch of up to `k` updates against `o`, applied to `o`.
pub fn random_batch(o: &mut OracleForest<SumI64>, r: &mut ChaCha8Rng, k: usize, max_deg: usize) -> Vec<Update<i64>> {
    let n = o.n() as u32;
    let mut ups = Vec::new();
    let mut touched = std::collections::HashSet::new();
    // deletions first, picked from current edges
    let mut edges = o.edges();
    edges.shuffle(r);
    let dels = r.gen_range(0..=k / 2).min(edges.len());
    for &(u, v, _) in &edges[..dels] {
        ups.push(Update::Delete(u, v));
        touched.insert((u.min(v), u.max(v)));
    }
    // inserts must be acyclic against the forest before the deletes
    let mut uf: Vec<u32> = (0..n).collect();
    fn f(uf: &mut Vec<u32>, x: u32) -> u32 {
        let mut r = x;
        while uf[r as usize] != r {
            r = uf[r as usize];
        }
        uf[x as usize] = r;
        r
    }
    for (u, v, _) in o.edges() {
        let (a, b) = (f(&mut uf, u), f(&mut uf, v));
        uf[a as usize] = b;
    }
    let mut deg: Vec<usize> = (0..n).map(|v| o.degree(v)).collect();
    let mut tries = 0;
    while ups.len() < k && tries < 20 * k {
        tries += 1;
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u == v || touched.contains(&(u.min(v), u.max(v))) || deg[u as usize] >= max_deg || deg[v as usize] >= max_deg {
            continue;
        }
        let (a, b) = (f(&mut uf, u), f(&mut uf, v));
        if a == b {
            continue;
        }
        uf[a as usize] = b;
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        touched.insert((u.min(v), u.max(v)));
        ups.push(Update::Insert(u, v, r.gen_range(-5..20)));
    }
    ups.shuffle(r);
    for up in &ups {
        if let Update::Delete(u, v) = *up {
            o.cut(u, v).unwrap();
        }
    }
    for up in &ups {
        if let Update::Insert(u, v, w) = *up {
            o.link(u, v, w).unwrap();
        }
    }
    ups
}
