//! Experiment drivers behind the CLI.
//!
//! Update benchmarks insert every edge of a generated tree and then delete
//! every edge, each phase in its own seeded random order, cut into batches
//! of `k`. Memory is the structure's own accounting (`heap_bytes`), sampled
//! when a phase ends; deletions never grow a structure, so the insert-phase
//! sample is also the peak of the delete phase.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{generate, tree_diameter, Family};
use crate::aggregate::SumI64;
use crate::batch::{Parallel, Sequential, Update};
use crate::error::{ForestError, Result};
use crate::hierarchy::{Config, Hierarchy};
use crate::link_cut::LinkCutTree;
use crate::oracle::OracleForest;
use crate::ternarize::TernarizedTopology;
use crate::trees::{TopologyTree, UfoTree};
use crate::VertexId;

pub const CSV_HEADER: &str = "impl,family,n,k,threads,seed,phase,wall_seconds,peak_bytes,touched_clusters";
pub const SWEEP_HEADER: &str = "alpha,seed,n,impl,diameter,wall_seconds";

/// Queries checked against the oracle per checkpoint in validation mode.
pub const VALIDATION_QUERIES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Impl {
    Ufo,
    Topology,
    TopologyTernarize,
    LinkCut,
    Oracle,
}

impl Impl {
    pub fn batched(self) -> bool {
        matches!(self, Impl::Ufo | Impl::Topology)
    }
}

impl fmt::Display for Impl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Impl::Ufo => "ufo",
            Impl::Topology => "topology",
            Impl::TopologyTernarize => "topology+ternarize",
            Impl::LinkCut => "linkcut",
            Impl::Oracle => "oracle",
        })
    }
}

impl FromStr for Impl {
    type Err = ForestError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ufo" => Impl::Ufo,
            "topology" => Impl::Topology,
            "topology+ternarize" | "ternarize" => Impl::TopologyTernarize,
            "linkcut" | "link-cut" => Impl::LinkCut,
            "oracle" => Impl::Oracle,
            _ => {
                return Err(ForestError::BadSpec(format!(
                    "unknown impl '{s}' (expected ufo, topology, topology+ternarize, linkcut, oracle)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct WorkloadSpec {
    pub family: Family,
    pub n: usize,
    /// Batch size; 1 means sequential link/cut.
    pub k: usize,
    pub seed: u64,
    pub imp: Impl,
    pub threads: usize,
    /// Queries per kind for query benchmarks.
    pub queries: usize,
    pub validate: bool,
}

impl WorkloadSpec {
    pub fn new(imp: Impl, family: Family, n: usize) -> Self {
        WorkloadSpec { family, n, k: 1, seed: 0, imp, threads: 1, queries: 100_000, validate: false }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(ForestError::BadSpec(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        if self.k > 1 && !self.imp.batched() {
            return bad(format!("{} has no batch updates; use k = 1", self.imp));
        }
        if self.imp == Impl::Topology && !self.family.max_degree_3() {
            return bad(format!("topology needs degree <= 3; {} is unbounded (use topology+ternarize)", self.family));
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub imp: Impl,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub threads: usize,
    pub seed: u64,
    pub phase: &'static str,
    pub wall_seconds: f64,
    pub peak_bytes: usize,
    pub touched: u64,
}

impl Row {
    fn new(s: &WorkloadSpec, phase: &'static str) -> Self {
        Row {
            imp: s.imp,
            family: s.family.to_string(),
            n: s.n,
            k: s.k,
            threads: s.threads,
            seed: s.seed,
            phase,
            wall_seconds: 0.0,
            peak_bytes: 0,
            touched: 0,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{},{}",
            self.imp,
            self.family,
            self.n,
            self.k,
            self.threads,
            self.seed,
            self.phase,
            self.wall_seconds,
            self.peak_bytes,
            self.touched
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub seed: u64,
    pub n: usize,
    pub imp: Impl,
    pub diameter: u64,
    pub wall_seconds: f64,
}

impl SweepRow {
    pub fn csv(&self) -> String {
        format!("{},{},{},{},{},{:.6}", self.alpha, self.seed, self.n, self.imp, self.diameter, self.wall_seconds)
    }
}

pub const BENCH_CONFIG: Config = Config { augment: crate::hierarchy::Augment::Path, rank_trees: false };

enum Engine {
    Ufo(UfoTree<SumI64>),
    Topo(TopologyTree<SumI64>),
    Tern(TernarizedTopology<SumI64>),
    Lct(LinkCutTree<SumI64>),
    Oracle(OracleForest<SumI64>),
}

enum Pool {
    Seq(Sequential),
    Par(Parallel),
}

impl Pool {
    fn new(threads: usize) -> Self {
        if threads > 1 {
            Pool::Par(Parallel::new(threads))
        } else {
            Pool::Seq(Sequential)
        }
    }
}

impl Engine {
    fn new(imp: Impl, n: usize) -> Self {
        match imp {
            Impl::Ufo => Engine::Ufo(UfoTree::new(n, SumI64, BENCH_CONFIG)),
            Impl::Topology => Engine::Topo(TopologyTree::new(n, SumI64, BENCH_CONFIG)),
            Impl::TopologyTernarize => Engine::Tern(TernarizedTopology::new(n, SumI64, BENCH_CONFIG)),
            Impl::LinkCut => Engine::Lct(LinkCutTree::new(n, SumI64)),
            Impl::Oracle => Engine::Oracle(OracleForest::new(n, SumI64)),
        }
    }

    /// Apply one batch; returns clusters touched (0 for non-contraction
    /// structures).
    fn apply(&mut self, ups: &[Update<i64>], pool: &Pool) -> Result<u64> {
        fn hier(h: &mut Hierarchy<SumI64>, ups: &[Update<i64>], pool: &Pool) -> Result<u64> {
            if ups.len() == 1 {
                match ups[0] {
                    Update::Insert(u, v, w) => h.link(u, v, w)?,
                    Update::Delete(u, v) => h.cut(u, v)?,
                }
            } else {
                match pool {
                    Pool::Seq(p) => h.batch_update_with(ups, p)?,
                    Pool::Par(p) => h.batch_update_with(ups, p)?,
                }
            }
            Ok(h.last_stats().touched)
        }
        let mut touched = 0;
        match self {
            Engine::Ufo(t) => return hier(t, ups, pool),
            Engine::Topo(t) => return hier(t, ups, pool),
            Engine::Tern(t) => {
                for u in ups {
                    match *u {
                        Update::Insert(a, b, w) => t.link(a, b, w)?,
                        Update::Delete(a, b) => t.cut(a, b)?,
                    }
                    touched += t.last_touched();
                }
            }
            Engine::Lct(t) => {
                for u in ups {
                    match *u {
                        Update::Insert(a, b, w) => t.link(a, b, w)?,
                        Update::Delete(a, b) => t.cut(a, b)?,
                    }
                }
            }
            Engine::Oracle(t) => {
                for u in ups {
                    match *u {
                        Update::Insert(a, b, w) => t.link(a, b, w)?,
                        Update::Delete(a, b) => t.cut(a, b)?,
                    }
                }
            }
        }
        Ok(touched)
    }

    fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        match self {
            Engine::Ufo(t) => t.connected(u, v),
            Engine::Topo(t) => t.connected(u, v),
            Engine::Tern(t) => t.connected(u, v),
            Engine::Lct(t) => t.connected(u, v),
            Engine::Oracle(t) => t.connected(u, v),
        }
    }

    fn path(&mut self, u: VertexId, v: VertexId) -> Result<i64> {
        match self {
            Engine::Ufo(t) => t.path_query(u, v),
            Engine::Topo(t) => t.path_query(u, v),
            Engine::Tern(t) => t.path_query(u, v),
            Engine::Lct(t) => t.path_query(u, v),
            Engine::Oracle(t) => t.path_aggregate(u, v),
        }
    }

    fn heap_bytes(&self) -> usize {
        match self {
            Engine::Ufo(t) => t.heap_bytes(),
            Engine::Topo(t) => t.heap_bytes(),
            Engine::Tern(t) => t.heap_bytes(),
            Engine::Lct(t) => t.heap_bytes(),
            Engine::Oracle(t) => t.heap_bytes(),
        }
    }
}

/// Seeded weighted edge list and the two phase orders.
fn workload(s: &WorkloadSpec) -> Result<(Vec<Update<i64>>, Vec<Update<i64>>)> {
    let edges = generate(s.family, s.n, s.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(1));
    let mut ins: Vec<Update<i64>> = edges.iter().map(|&(a, b)| Update::Insert(a, b, rng.gen_range(1..=1000))).collect();
    ins.shuffle(&mut rng);
    let mut del: Vec<Update<i64>> = edges.iter().map(|&(a, b)| Update::Delete(a, b)).collect();
    del.shuffle(&mut rng);
    Ok((ins, del))
}

fn oracle_apply(o: &mut OracleForest<SumI64>, ups: &[Update<i64>]) {
    for u in ups {
        match *u {
            Update::Insert(a, b, w) => o.link(a, b, w).expect("oracle link"),
            Update::Delete(a, b) => o.cut(a, b).expect("oracle cut"),
        }
    }
}

/// Cross-check `q` connectivity and `q` path queries on random pairs.
fn cross_check(e: &mut Engine, o: &OracleForest<SumI64>, q: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let n = o.n() as u32;
    for _ in 0..q {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let c = o.connected(u, v);
        if e.connected(u, v) != c {
            return Err(ForestError::Validation(format!("connected({u}, {v}) disagrees with oracle ({c})")));
        }
        let want = o.path_aggregate(u, v).ok();
        let got = e.path(u, v).ok();
        if got != want {
            return Err(ForestError::Validation(format!("path({u}, {v}) = {got:?}, oracle {want:?}")));
        }
    }
    Ok(())
}

/// Insert then delete every edge; one row per phase.
pub fn bench_updates(s: &WorkloadSpec) -> Result<Vec<Row>> {
    s.check()?;
    let (ins, del) = workload(s)?;
    let pool = Pool::new(s.threads);
    let mut e = Engine::new(s.imp, s.n);
    let mut oracle = s.validate.then(|| OracleForest::new(s.n, SumI64));
    let mut vrng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(2));

    let mut insert = Row::new(s, "insert");
    for chunk in ins.chunks(s.k) {
        let t0 = Instant::now();
        insert.touched += e.apply(chunk, &pool)?;
        insert.wall_seconds += t0.elapsed().as_secs_f64();
        if let Some(o) = oracle.as_mut() {
            oracle_apply(o, chunk);
        }
    }
    insert.peak_bytes = e.heap_bytes();
    if let Some(o) = &oracle {
        cross_check(&mut e, o, VALIDATION_QUERIES, &mut vrng)?;
    }

    let mut delete = Row::new(s, "delete");
    delete.peak_bytes = insert.peak_bytes;
    let half = del.len().div_ceil(2).div_ceil(s.k);
    for (i, chunk) in del.chunks(s.k).enumerate() {
        let t0 = Instant::now();
        delete.touched += e.apply(chunk, &pool)?;
        delete.wall_seconds += t0.elapsed().as_secs_f64();
        if let Some(o) = oracle.as_mut() {
            oracle_apply(o, chunk);
            if i + 1 == half {
                cross_check(&mut e, o, VALIDATION_QUERIES, &mut vrng)?;
            }
        }
    }
    if let Some(o) = &oracle {
        cross_check(&mut e, o, VALIDATION_QUERIES, &mut vrng)?;
    }
    Ok(vec![insert, delete])
}

fn build(s: &WorkloadSpec) -> Result<(Engine, Option<OracleForest<SumI64>>, Row)> {
    s.check()?;
    let (ins, _) = workload(s)?;
    let pool = Pool::new(s.threads);
    let mut e = Engine::new(s.imp, s.n);
    let mut row = Row::new(s, "build");
    for chunk in ins.chunks(s.k) {
        let t0 = Instant::now();
        row.touched += e.apply(chunk, &pool)?;
        row.wall_seconds += t0.elapsed().as_secs_f64();
    }
    row.peak_bytes = e.heap_bytes();
    let oracle = s.validate.then(|| {
        let mut o = OracleForest::new(s.n, SumI64);
        oracle_apply(&mut o, &ins);
        o
    });
    Ok((e, oracle, row))
}

/// Time `queries` connectivity and `queries` path queries over random
/// pairs of the full tree; rows have phases `connected` and `path`.
pub fn bench_queries(s: &WorkloadSpec) -> Result<Vec<Row>> {
    let (mut e, oracle, built) = build(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(3));
    let n = s.n as u32;
    let pairs: Vec<(u32, u32)> = (0..s.queries).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();

    let mut conn = Row::new(s, "connected");
    conn.peak_bytes = built.peak_bytes;
    let t0 = Instant::now();
    let mut hits = 0usize;
    for &(u, v) in &pairs {
        hits += e.connected(u, v) as usize;
    }
    conn.wall_seconds = t0.elapsed().as_secs_f64();
    std::hint::black_box(hits);

    let mut path = Row::new(s, "path");
    path.peak_bytes = built.peak_bytes;
    let t0 = Instant::now();
    let mut acc = 0i64;
    for &(u, v) in &pairs {
        acc = acc.wrapping_add(e.path(u, v)?);
    }
    path.wall_seconds = t0.elapsed().as_secs_f64();
    std::hint::black_box(acc);

    if let Some(o) = &oracle {
        cross_check(&mut e, o, VALIDATION_QUERIES, &mut rng)?;
    }
    Ok(vec![conn, path])
}

/// Live bytes after a full build.
pub fn measure_memory(s: &WorkloadSpec) -> Result<Row> {
    let (mut e, oracle, row) = build(s)?;
    if let Some(o) = &oracle {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(4));
        cross_check(&mut e, o, VALIDATION_QUERIES, &mut rng)?;
    }
    Ok(row)
}

/// Total insert-plus-delete time on zipf trees for every (alpha, seed),
/// each the median of `reps` runs.
pub fn diameter_sweep(imp: Impl, alphas: &[f64], n: usize, seeds: &[u64], k: usize, reps: usize) -> Result<Vec<SweepRow>> {
    if reps == 0 {
        return Err(ForestError::BadSpec("reps must be at least 1".into()));
    }
    let mut out = Vec::new();
    for &alpha in alphas {
        for &seed in seeds {
            let mut s = WorkloadSpec::new(imp, Family::Zipf(alpha), n);
            s.seed = seed;
            s.k = k;
            s.check()?;
            let diameter = tree_diameter(n, &generate(s.family, n, seed)?);
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                times.push(bench_updates(&s)?.iter().map(|r| r.wall_seconds).sum());
            }
            let wall_seconds = median(&times);
            out.push(SweepRow { alpha, seed, n, imp, diameter, wall_seconds });
        }
    }
    Ok(out)
}

/// Median of a non-empty sample.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}
