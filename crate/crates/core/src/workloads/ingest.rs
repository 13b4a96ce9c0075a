//! Edge-list files and spanning forests of general graphs.
//!
//! Format: one edge per line as `u v` or `u v w`, whitespace separated,
//! 0-based ids. Blank lines and lines starting with `#` are skipped.

use std::collections::VecDeque;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ForestError, Result};
use crate::VertexId;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId, Option<i64>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForestMode {
    Bfs,
    Ris,
}

impl FromStr for ForestMode {
    type Err = ForestError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bfs" => Ok(ForestMode::Bfs),
            "ris" => Ok(ForestMode::Ris),
            _ => Err(ForestError::BadSpec(format!("unknown forest mode '{s}' (expected bfs or ris)"))),
        }
    }
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut g = Graph::default();
    for (i, line) in r.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| ForestError::Parse { line: line_no, msg: e.to_string() })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let perr = |msg: String| ForestError::Parse { line: line_no, msg };
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 2 && f.len() != 3 {
            return Err(perr(format!("expected 'u v' or 'u v w', got {} fields", f.len())));
        }
        let id = |s: &str| s.parse::<VertexId>().map_err(|_| perr(format!("bad vertex id '{s}'")));
        let (u, v) = (id(f[0])?, id(f[1])?);
        let w = match f.get(2) {
            Some(s) => Some(s.parse::<i64>().map_err(|_| perr(format!("bad weight '{s}'")))?),
            None => None,
        };
        g.n = g.n.max(u.max(v) as usize + 1);
        g.edges.push((u, v, w));
    }
    Ok(g)
}

pub fn write_edge_list<W: Write>(mut w: W, edges: &[(VertexId, VertexId)]) -> std::io::Result<()> {
    for &(a, b) in edges {
        writeln!(w, "{a} {b}")?;
    }
    Ok(())
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            self.0[x as usize] = self.0[self.0[x as usize] as usize];
            x = self.0[x as usize];
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a as usize] = b;
        a != b
    }
}

/// Spanning forest of `g`. BFS grows a tree from a seeded random root in
/// every component; RIS keeps each edge of a seeded permutation that joins
/// two components. Self loops and parallel edges are ignored.
pub fn spanning_forest(g: &Graph, mode: ForestMode, seed: u64) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        ForestMode::Ris => {
            let mut order: Vec<usize> = (0..g.edges.len()).collect();
            order.shuffle(&mut rng);
            ris_in_order(g, &order)
        }
        ForestMode::Bfs => {
            let mut adj = vec![Vec::new(); g.n];
            for &(u, v, _) in &g.edges {
                if u != v {
                    adj[u as usize].push(v);
                    adj[v as usize].push(u);
                }
            }
            let mut roots: Vec<u32> = (0..g.n as u32).collect();
            roots.shuffle(&mut rng);
            let mut seen = vec![false; g.n];
            let mut out = Vec::new();
            let mut q = VecDeque::new();
            for r in roots {
                if seen[r as usize] {
                    continue;
                }
                seen[r as usize] = true;
                q.push_back(r);
                while let Some(x) = q.pop_front() {
                    for &y in &adj[x as usize] {
                        if !seen[y as usize] {
                            seen[y as usize] = true;
                            out.push((x, y));
                            q.push_back(y);
                        }
                    }
                }
            }
            out
        }
    }
}

/// RIS forest for an explicit edge order.
pub fn ris_in_order(g: &Graph, order: &[usize]) -> Vec<(VertexId, VertexId)> {
    let mut d = Dsu::new(g.n);
    let mut out = Vec::new();
    for &i in order {
        let (u, v, _) = g.edges[i];
        if d.union(u, v) {
            out.push((u, v));
        }
    }
    out
}

/// Number of connected components of `g` (isolated vertices included).
pub fn component_count(g: &Graph) -> usize {
    let mut d = Dsu::new(g.n);
    let mut c = g.n;
    for &(u, v, _) in &g.edges {
        if d.union(u, v) {
            c -= 1;
        }
    }
    c
}
