//! Data in, regions out.

mod bench;
mod data;
mod export;
mod generate;

pub use bench::{
    compute_region, run_benchmark, run_search, Algorithm, AlgorithmChoice, BenchConfig,
    BenchRecord, InputSource, RunConfig,
};
pub use data::{dedup_ties, load_csv, read_csv, write_csv, CsvOptions};
pub use export::{
    export_region, import_regions, off_string, region_to_json, table_string, OutputFormat,
};
pub use generate::{
    generate_gaussian, random_unit_vector, seeded_rng, uniform01, NormalStream,
};
