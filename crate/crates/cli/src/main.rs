use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tukey_regions::io::{
    compute_region, export_region, import_regions, run_benchmark, table_string, write_csv,
    generate_gaussian, Algorithm, AlgorithmChoice, BenchConfig, BenchRecord, CsvOptions,
    InputSource, OutputFormat, RunConfig,
};
use tukey_regions::oracle::{verify_region, VerifyOptions, VerifyReport, DEFAULT_ORACLE_CAP};
use tukey_regions::{Error, PointCloud, RegionPolytope, SearchOptions, Tolerances};

#[derive(Parser)]
#[command(name = "tukey-regions", version, about = "Exact Tukey depth trimmed regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute regions for one dataset.
    Region(RegionArgs),
    /// Time the searches over a grid of Gaussian datasets.
    Bench(BenchArgs),
    /// Recheck regions saved as JSON against their dataset.
    Verify(VerifyArgs),
    /// Write a Gaussian dataset as CSV.
    Gen(GenArgs),
}

#[derive(Args)]
struct DataArgs {
    /// CSV path or generator spec `gaussian:N,P`.
    #[arg(long)]
    input: String,
    /// Seed for the generator and the breadth-first search.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// The CSV has a header row.
    #[arg(long)]
    header: bool,
    /// Remove exact duplicate rows first.
    #[arg(long)]
    dedup: bool,
    #[arg(long, default_value_t = 1e-9)]
    tol_geom: f64,
    /// Largest C(n, p-1) for exact depth checks.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: u128,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Depth level; repeat for several regions.
    #[arg(long, required = true)]
    tau: Vec<f64>,
    /// naive, bfs or both (both also checks that they agree).
    #[arg(long, default_value = "bfs")]
    algorithm: String,
    /// json, off or table.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the brute-force certificates; exit 1 if any fails.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "n", required = true)]
    ns: Vec<usize>,
    #[arg(long = "p", required = true)]
    ps: Vec<usize>,
    #[arg(long, required = true)]
    tau: Vec<f64>,
    #[arg(long, default_value = "both")]
    algorithm: String,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also build each polytope.
    #[arg(long)]
    region: bool,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    data: DataArgs,
    /// JSON Lines file written by `region`.
    #[arg(long)]
    regions: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Region(a) => region(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run_config(data: &DataArgs) -> Result<RunConfig, Failure> {
    Ok(RunConfig {
        input: data.input.parse::<InputSource>()?,
        seed: data.seed,
        tol: Tolerances::with_geom(data.tol_geom),
        oracle_cap: data.oracle_cap,
        csv: CsvOptions {
            has_header: data.header,
        },
        dedup: data.dedup,
        ..Default::default()
    })
}

fn load(config: &RunConfig) -> Result<PointCloud, Failure> {
    let (cloud, removed) = config.load()?;
    if config.dedup {
        eprintln!("removed {removed} duplicate rows, {} remain", cloud.len());
    }
    Ok(cloud)
}

fn report(label: &str, r: &VerifyReport) {
    for e in &r.entries {
        let mark = if e.passed { "pass" } else { "FAIL" };
        eprintln!("[{label}] {mark} {}: {}", e.name, e.detail);
    }
}

/// Verifies regions in increasing `tau`, each nested in the previous one.
fn verify_all(cloud: &PointCloud, regions: &[RegionPolytope], tol: Tolerances, cap: u128) -> Vec<String> {
    let mut order: Vec<usize> = (0..regions.len()).collect();
    order.sort_by(|&a, &b| regions[a].tau.total_cmp(&regions[b].tau));
    let mut failures = Vec::new();
    let mut coarser: Option<&RegionPolytope> = None;
    for &i in &order {
        let r = &regions[i];
        let opts = VerifyOptions {
            tol,
            oracle_cap: cap,
            coarser,
        };
        let rep = verify_region(cloud, r, &opts);
        report(&format!("tau={}", r.tau), &rep);
        if !rep.passed() {
            failures.push(format!("tau={}", r.tau));
        }
        coarser = Some(r);
    }
    failures
}

fn region(a: RegionArgs) -> Result<(), Failure> {
    let mut config = run_config(&a.data)?;
    config.taus = a.tau.clone();
    config.algorithm = a.algorithm.parse::<AlgorithmChoice>()?;
    config.format = a.format.parse::<OutputFormat>()?;
    config.verify = a.verify;
    config.parallel = a.parallel;
    config.validate()?;
    if config.format == OutputFormat::Off && config.taus.len() != 1 {
        return Err(Error::FormatUnsupported("OFF output takes exactly one --tau".into()).into());
    }
    let cloud = load(&config)?;
    let options: SearchOptions = config.search_options();

    let mut regions = Vec::new();
    let mut records = Vec::new();
    let mut mismatches = Vec::new();
    for &tau in &config.taus {
        let mut first: Option<RegionPolytope> = None;
        let mut directions = Vec::new();
        for algorithm in config.algorithm.algorithms() {
            let start = std::time::Instant::now();
            let (region, outcome) = compute_region(&cloud, tau, algorithm, config.seed, &options)?;
            if !outcome.bound.passed {
                mismatches.push(format!("tau={tau}: {} directions exceed {}", outcome.bound.count, outcome.bound.bound));
            }
            records.push(BenchRecord {
                n: cloud.len(),
                p: cloud.dim(),
                tau,
                k_tau: region.k_tau,
                algorithm,
                directions: Some(outcome.criticals.len()),
                wall_time_seconds: start.elapsed().as_secs_f64(),
                status: Some(region.status),
                facets: Some(region.facets.len()),
                vertices: Some(region.vertices.len()),
                seed: config.seed,
                error: None,
            });
            directions.push(outcome.criticals);
            first.get_or_insert(region);
        }
        if directions.windows(2).any(|w| !w[0].same_directions(&w[1])) {
            mismatches.push(format!("tau={tau}: {} and {} disagree", Algorithm::Naive, Algorithm::Bfs));
        }
        regions.push(first.expect("at least one algorithm"));
    }

    let bytes = match config.format {
        OutputFormat::Table => table_string(&records).into_bytes(),
        format => {
            let mut b = Vec::new();
            for r in &regions {
                b.extend(export_region(r, format)?);
            }
            b
        }
    };
    emit(&a.out, &bytes)?;

    if config.verify {
        mismatches.extend(verify_all(&cloud, &regions, config.tol, config.oracle_cap));
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(mismatches.join("; ")))
    }
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let config = BenchConfig {
        ns: a.ns,
        ps: a.ps,
        taus: a.tau,
        algorithm: a.algorithm.parse()?,
        repetitions: a.reps,
        seed: a.seed,
        build_region: a.region,
        options: SearchOptions {
            parallel: a.parallel,
            ..Default::default()
        },
    };
    let records = run_benchmark(&config);
    emit(&a.out, table_string(&records).as_bytes())
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let config = run_config(&a.data)?;
    let cloud = load(&config)?;
    let regions = import_regions(&fs::read_to_string(&a.regions)?)?;
    for r in &regions {
        if r.n != cloud.len() || r.dim != cloud.dim() {
            return Err(Error::InvalidCloud(format!(
                "regions were computed for n={}, p={} but the data has n={}, p={}",
                r.n,
                r.dim,
                cloud.len(),
                cloud.dim()
            ))
            .into());
        }
    }
    let failures = verify_all(&cloud, &regions, config.tol, config.oracle_cap);
    if failures.is_empty() {
        eprintln!("{} regions verified", regions.len());
        Ok(())
    } else {
        Err(Failure::Verification(failures.join(", ")))
    }
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let cloud = generate_gaussian(a.n, a.p, a.seed)?;
    let mut buf = Vec::new();
    write_csv(&cloud, &mut buf)?;
    emit(&a.out, &buf)
}
