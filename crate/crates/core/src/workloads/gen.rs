//! Deterministic tree generators.
//!
//! Every generator is driven by `ChaCha8Rng::seed_from_u64(seed)`, so a
//! (family, n, seed) triple always yields the same edge list.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ForestError, Result};
use crate::VertexId;

pub type Edge = (VertexId, VertexId);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Path,
    Binary,
    Kary(u32),
    Star,
    /// Path on the first ⌈n/2⌉ vertices, the other ⌊n/2⌋ hanging off its
    /// last vertex.
    Dandelion,
    /// Uniform attachment restricted to vertices of degree below 3.
    RandomDeg3,
    RandomUnbounded,
    PrefAttach,
    /// Vertex i attaches to target t in [0, i) with P(t) proportional to
    /// (t + 1)^-alpha, so larger alpha gives lower diameter.
    Zipf(f64),
}

impl Family {
    /// Families whose trees keep every degree at most 3.
    pub fn max_degree_3(&self) -> bool {
        match self {
            Family::Path | Family::Binary | Family::RandomDeg3 => true,
            Family::Kary(k) => *k <= 2,
            _ => false,
        }
    }

    pub const ALL_NAMES: &'static [&'static str] =
        &["path", "binary", "kary:K", "star", "dandelion", "random_deg3", "random_unbounded", "pref_attach", "zipf:A"];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => write!(f, "path"),
            Family::Binary => write!(f, "binary"),
            Family::Kary(k) => write!(f, "kary:{k}"),
            Family::Star => write!(f, "star"),
            Family::Dandelion => write!(f, "dandelion"),
            Family::RandomDeg3 => write!(f, "random_deg3"),
            Family::RandomUnbounded => write!(f, "random_unbounded"),
            Family::PrefAttach => write!(f, "pref_attach"),
            Family::Zipf(a) => write!(f, "zipf:{a}"),
        }
    }
}

impl FromStr for Family {
    type Err = ForestError;

    /// Accepts `kary:4`, `kary(4)`, `zipf:1.5` and `zipf(1.5)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || ForestError::BadSpec(format!("unknown family '{s}' (expected one of {})", Family::ALL_NAMES.join(", ")));
        let (name, arg) = match s.find([':', '(']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let f = match (name, arg) {
            ("path", None) => Family::Path,
            ("binary", None) => Family::Binary,
            ("star", None) => Family::Star,
            ("dandelion", None) => Family::Dandelion,
            ("random_deg3", None) => Family::RandomDeg3,
            ("random_unbounded", None) => Family::RandomUnbounded,
            ("pref_attach", None) => Family::PrefAttach,
            ("kary", Some(a)) => {
                let k: u32 = a.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(ForestError::BadSpec("kary needs k >= 1".into()));
                }
                Family::Kary(k)
            }
            ("zipf", Some(a)) => {
                let a: f64 = a.parse().map_err(|_| bad())?;
                if !a.is_finite() || a < 0.0 {
                    return Err(ForestError::BadSpec("zipf needs a finite alpha >= 0".into()));
                }
                Family::Zipf(a)
            }
            _ => return Err(bad()),
        };
        Ok(f)
    }
}

/// The family's tree on ids in construction order (vertex 0 is the root
/// or hub). Edges are (parent, child).
pub fn generate_unpermuted(family: Family, n: usize, seed: u64) -> Result<Vec<Edge>> {
    if n == 0 {
        return Err(ForestError::BadSpec("n must be at least 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(ForestError::BadSpec("n does not fit in 32-bit ids".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n32 = n as u32;
    let e: Vec<Edge> = match family {
        Family::Path => (1..n32).map(|i| (i - 1, i)).collect(),
        Family::Binary => (1..n32).map(|i| ((i - 1) / 2, i)).collect(),
        Family::Kary(k) => (1..n32).map(|i| ((i - 1) / k, i)).collect(),
        Family::Star => (1..n32).map(|i| (0, i)).collect(),
        Family::Dandelion => {
            let p = n32.div_ceil(2);
            let mut e: Vec<Edge> = (1..p).map(|i| (i - 1, i)).collect();
            e.extend((p..n32).map(|i| (p - 1, i)));
            e
        }
        Family::RandomDeg3 => {
            // vertices that can still take a child
            let mut open: Vec<u32> = vec![0];
            let mut deg = vec![0u8; n];
            let mut e = Vec::with_capacity(n - 1);
            for i in 1..n32 {
                let k = rng.gen_range(0..open.len());
                let p = open[k];
                e.push((p, i));
                deg[p as usize] += 1;
                if deg[p as usize] == 3 {
                    open.swap_remove(k);
                }
                deg[i as usize] = 1;
                open.push(i);
            }
            e
        }
        Family::RandomUnbounded => (1..n32).map(|i| (rng.gen_range(0..i), i)).collect(),
        Family::PrefAttach => {
            // an endpoint of a uniform edge is a degree-proportional vertex
            let mut e: Vec<Edge> = Vec::with_capacity(n - 1);
            for i in 1..n32 {
                let p = if e.is_empty() {
                    0
                } else {
                    let (a, b) = e[rng.gen_range(0..e.len())];
                    if rng.gen::<bool>() {
                        a
                    } else {
                        b
                    }
                };
                e.push((p, i));
            }
            e
        }
        Family::Zipf(alpha) => {
            let mut cdf = Vec::with_capacity(n);
            let mut acc = 0.0f64;
            cdf.push(0.0);
            for j in 1..n {
                acc += (j as f64).powf(-alpha);
                cdf.push(acc);
            }
            (1..n32)
                .map(|i| {
                    let x = rng.gen::<f64>() * cdf[i as usize];
                    // smallest j in [1, i] with cdf[j] > x; target j - 1
                    let j = cdf[1..=i as usize].partition_point(|&c| c <= x) as u32 + 1;
                    (j.min(i) - 1, i)
                })
                .collect()
        }
    };
    Ok(e)
}

/// The family's tree with vertex ids relabeled by a seeded uniform
/// permutation.
pub fn generate(family: Family, n: usize, seed: u64) -> Result<Vec<Edge>> {
    let e = generate_unpermuted(family, n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    Ok(e.into_iter().map(|(a, b)| (perm[a as usize], perm[b as usize])).collect())
}

/// Hop diameter of a tree given as an edge list, by double sweep.
pub fn tree_diameter(n: usize, edges: &[Edge]) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut start = vec![0u32; n + 1];
    for &(a, b) in edges {
        start[a as usize + 1] += 1;
        start[b as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut nb = vec![0u32; 2 * edges.len()];
    for &(a, b) in edges {
        nb[fill[a as usize] as usize] = b;
        fill[a as usize] += 1;
        nb[fill[b as usize] as usize] = a;
        fill[b as usize] += 1;
    }
    let bfs = |s: u32| -> (u32, u64) {
        let mut dist = vec![u64::MAX; n];
        let mut q = std::collections::VecDeque::new();
        dist[s as usize] = 0;
        q.push_back(s);
        let mut far = (s, 0);
        while let Some(x) = q.pop_front() {
            let d = dist[x as usize];
            if d > far.1 {
                far = (x, d);
            }
            for &y in &nb[start[x as usize] as usize..start[x as usize + 1] as usize] {
                if dist[y as usize] == u64::MAX {
                    dist[y as usize] = d + 1;
                    q.push_back(y);
                }
            }
        }
        far
    };
    let (a, _) = bfs(0);
    bfs(a).1
}
