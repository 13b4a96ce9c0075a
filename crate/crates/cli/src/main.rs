use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynforest::workloads::{
    bench_queries, bench_updates, diameter_sweep, generate, measure_memory, median, read_edge_list, spanning_forest,
    write_edge_list, Family, ForestMode, Impl, Row, WorkloadSpec, CSV_HEADER, SWEEP_HEADER,
};
use dynforest::ForestError;

/// Dynamic forest benchmarks. CSV goes to stdout, diagnostics to stderr.
#[derive(Parser)]
#[command(name = "dynforest", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated tree as an edge list.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Insert then delete every edge of a generated tree.
    BenchUpdates(BenchArgs),
    /// Time connectivity and path queries on a full tree.
    BenchQueries {
        #[command(flatten)]
        b: BenchArgs,
        /// Queries of each kind.
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
    },
    /// Update time against diameter on zipf trees.
    DiameterSweep {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1.0,1.5,2.0")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Comma list or a half-open range like 0..5.
        #[arg(long, default_value = "0..5")]
        seeds: String,
        #[arg(long = "impl", default_value = "ufo")]
        imp: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Runs per (alpha, seed); the row reports their median.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
    /// Spanning forest of an edge-list graph.
    Ingest {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "bfs")]
        forest: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Live structure bytes after a full build.
    Mem {
        #[arg(long = "impl")]
        imp: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "impl")]
    imp: String,
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions; every sample is printed, medians go to stderr.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Cross-check sampled queries against the brute-force oracle.
    #[arg(long)]
    validate: bool,
}

#[derive(Debug)]
enum Failure {
    Forest(ForestError),
    Io(io::Error),
}

impl From<ForestError> for Failure {
    fn from(e: ForestError) -> Self {
        Failure::Forest(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Res = std::result::Result<(), Failure>;

fn spec(b: &BenchArgs) -> Result<WorkloadSpec, ForestError> {
    let mut s = WorkloadSpec::new(b.imp.parse()?, b.family.parse()?, b.n);
    s.k = b.k;
    s.threads = b.threads;
    s.seed = b.seed;
    s.validate = b.validate;
    s.check()?;
    if b.reps == 0 {
        return Err(ForestError::BadSpec("reps must be at least 1".into()));
    }
    Ok(s)
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, ForestError> {
    let bad = || ForestError::BadSpec(format!("bad seed list '{s}'"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        if a >= b {
            return Err(bad());
        }
        return Ok((a..b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report(rows: &[Row], out: &mut impl Write) -> io::Result<()> {
    for r in rows {
        writeln!(out, "{}", r.csv())?;
    }
    let mut phases: Vec<&str> = rows.iter().map(|r| r.phase).collect();
    phases.dedup();
    phases.sort();
    phases.dedup();
    for p in phases {
        let t: Vec<f64> = rows.iter().filter(|r| r.phase == p).map(|r| r.wall_seconds).collect();
        eprintln!("{p}: median {:.6}s over {} runs", median(&t), t.len());
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    let stdout = io::stdout();
    match cli.cmd {
        Cmd::Gen { family, n, seed, out } => {
            let f: Family = family.parse()?;
            let e = generate(f, n, seed)?;
            let mut w = sink(&out)?;
            write_edge_list(&mut w, &e)?;
            w.flush()?;
        }
        Cmd::BenchUpdates(b) => {
            let s = spec(&b)?;
            let mut rows = Vec::new();
            for _ in 0..b.reps {
                rows.extend(bench_updates(&s)?);
            }
            let mut w = stdout.lock();
            writeln!(w, "{CSV_HEADER}")?;
            report(&rows, &mut w)?;
        }
        Cmd::BenchQueries { b, queries } => {
            let mut s = spec(&b)?;
            s.queries = queries;
            let mut rows = Vec::new();
            for _ in 0..b.reps {
                rows.extend(bench_queries(&s)?);
            }
            let mut w = stdout.lock();
            writeln!(w, "{CSV_HEADER}")?;
            report(&rows, &mut w)?;
        }
        Cmd::DiameterSweep { alphas, n, seeds, imp, k, reps } => {
            let seeds = parse_seeds(&seeds)?;
            let imp: Impl = imp.parse()?;
            let rows = diameter_sweep(imp, &alphas, n, &seeds, k, reps)?;
            let mut w = stdout.lock();
            writeln!(w, "{SWEEP_HEADER}")?;
            for r in &rows {
                writeln!(w, "{}", r.csv())?;
            }
            for &a in &alphas {
                let t: Vec<f64> = rows.iter().filter(|r| r.alpha == a).map(|r| r.wall_seconds).collect();
                eprintln!("alpha {a}: median {:.6}s", median(&t));
            }
        }
        Cmd::Ingest { graph, forest, seed, out } => {
            let mode: ForestMode = forest.parse()?;
            let g = read_edge_list(BufReader::new(File::open(&graph)?))?;
            let f = spanning_forest(&g, mode, seed);
            eprintln!("{} vertices, {} edges, forest of {} edges", g.n, g.edges.len(), f.len());
            let mut w = sink(&out)?;
            write_edge_list(&mut w, &f)?;
            w.flush()?;
        }
        Cmd::Mem { imp, family, n, seed, k } => {
            let mut s = WorkloadSpec::new(imp.parse()?, family.parse()?, n);
            s.seed = seed;
            s.k = k;
            let row = measure_memory(&s)?;
            let mut w = stdout.lock();
            writeln!(w, "{CSV_HEADER}")?;
            writeln!(w, "{}", row.csv())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Forest(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                ForestError::BadSpec(_) | ForestError::Parse { .. } => 2,
                ForestError::Validation(_) => 3,
                _ => 1,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
