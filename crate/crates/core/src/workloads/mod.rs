//! Generators, graph ingestion and benchmark drivers.

pub mod bench;
pub mod gen;
pub mod ingest;

pub use bench::{
    bench_queries, bench_updates, diameter_sweep, measure_memory, median, Impl, Row, SweepRow, WorkloadSpec, CSV_HEADER,
    SWEEP_HEADER,
};
pub use gen::{generate, generate_unpermuted, tree_diameter, Family};
pub use ingest::{read_edge_list, spanning_forest, write_edge_list, ForestMode, Graph};
