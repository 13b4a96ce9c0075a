mod common;

use common::*;
use dynforest::{Config, Hierarchy, Kind, OracleForest, Parallel, Primitives, Sequential, SumI64};
use rand::prelude::*;

fn run<P: Primitives>(kind: Kind, cfg: Config, n: usize, k: usize, batches: usize, seed: u64, p: &P) {
    let max_deg = if kind == Kind::Topology { 3 } else { usize::MAX };
    let mut r = rng(seed);
    let mut h = Hierarchy::new(n, SumI64, kind, cfg);
    let mut o = OracleForest::new(n, SumI64);
    for v in 0..n as u32 {
        let x = r.gen_range(-3..10);
        h.set_value(v, x);
        o.set_value(v, x);
    }
    for b in 0..batches {
        let ups = random_batch(&mut o, &mut r, k, max_deg);
        h.batch_update_with(&ups, p).unwrap_or_else(|e| panic!("seed {seed} batch {b}: {e}"));
        h.validate().unwrap_or_else(|e| panic!("{kind:?} seed {seed} batch {b}: {e}"));
        h.check_contraction().unwrap_or_else(|e| panic!("seed {seed} batch {b}: {e}"));
        compare_queries(&h, &o, &mut r, 20, true).unwrap_or_else(|e| panic!("{kind:?} seed {seed} batch {b}: {e}"));
    }
}

#[test]
fn ufo_batches_sequential_executor() {
    for seed in 0..30 {
        run(Kind::Ufo, Config::full(), 5 + seed as usize * 7, 1 + seed as usize % 17, 30, seed, &Sequential);
    }
}

#[test]
fn topology_batches_sequential_executor() {
    for seed in 0..30 {
        run(Kind::Topology, Config::full(), 5 + seed as usize * 7, 1 + seed as usize % 17, 30, seed, &Sequential);
    }
}

#[test]
fn ufo_batches_parallel_executor() {
    let p = Parallel::new(4);
    for seed in 0..6 {
        run(Kind::Ufo, Config::full(), 3000, 1500, 6, seed, &p);
        run(Kind::Ufo, Config::ranked(), 500, 100, 6, seed, &p);
    }
}

#[test]
fn topology_batches_parallel_executor() {
    let p = Parallel::new(4);
    for seed in 0..6 {
        run(Kind::Topology, Config::full(), 3000, 1500, 6, seed, &p);
    }
}
