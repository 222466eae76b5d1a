//! Run configuration and the benchmark grid.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::oracle::DEFAULT_ORACLE_CAP;
use crate::region::{build_region, RegionPolytope, RegionStatus};
use crate::search::{algorithm1, algorithm2, k_tau, SearchOptions, SearchOutcome};
use crate::tolerance::Tolerances;

use super::data::{dedup_ties, load_csv, CsvOptions};
use super::export::OutputFormat;
use super::generate::{generate_gaussian, seeded_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Naive,
    Bfs,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Naive => "naive",
            Self::Bfs => "bfs",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmChoice {
    Naive,
    Bfs,
    Both,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            Self::Naive => vec![Algorithm::Naive],
            Self::Bfs => vec![Algorithm::Bfs],
            Self::Both => vec![Algorithm::Naive, Algorithm::Bfs],
        }
    }
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Self::Naive),
            "bfs" => Ok(Self::Bfs),
            "both" => Ok(Self::Both),
            other => Err(Error::InvalidCloud(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// A CSV file or a generator spec `gaussian:N,P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    File(PathBuf),
    Gaussian { n: usize, p: usize },
}

impl FromStr for InputSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(spec) = s.strip_prefix("gaussian:") else {
            return Ok(Self::File(PathBuf::from(s)));
        };
        let bad = || Error::InvalidCloud(format!("generator spec {s:?} is not gaussian:N,P"));
        let (n, p) = spec.split_once(',').ok_or_else(bad)?;
        Ok(Self::Gaussian {
            n: n.trim().parse().map_err(|_| bad())?,
            p: p.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl InputSource {
    pub fn load(&self, seed: u64, csv: CsvOptions) -> Result<PointCloud> {
        match self {
            Self::File(path) => load_csv(path, csv),
            Self::Gaussian { n, p } => generate_gaussian(*n, *p, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: InputSource,
    pub taus: Vec<f64>,
    pub algorithm: AlgorithmChoice,
    /// Seeds both the generator and the breadth-first search.
    pub seed: u64,
    pub tol: Tolerances,
    pub format: OutputFormat,
    pub verify: bool,
    pub parallel: bool,
    pub visited_budget: u128,
    pub oracle_cap: u128,
    pub csv: CsvOptions,
    pub dedup: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: InputSource::Gaussian { n: 40, p: 3 },
            taus: vec![0.1],
            algorithm: AlgorithmChoice::Bfs,
            seed: 1,
            tol: Tolerances::default(),
            format: OutputFormat::Json,
            verify: false,
            parallel: false,
            visited_budget: SearchOptions::default().visited_budget,
            oracle_cap: DEFAULT_ORACLE_CAP,
            csv: CsvOptions::default(),
            dedup: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.taus.is_empty() {
            return Err(Error::InvalidDepthLevel { tau: f64::NAN, n: 0 });
        }
        for &tau in &self.taus {
            if !(tau > 0.0 && tau <= 1.0) {
                return Err(Error::InvalidDepthLevel { tau, n: 0 });
            }
        }
        Ok(())
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            tol: self.tol,
            visited_budget: self.visited_budget,
            parallel: self.parallel,
            ..Default::default()
        }
    }

    /// Loads the input, removing exact duplicates when `dedup` is set.
    pub fn load(&self) -> Result<(PointCloud, usize)> {
        let cloud = self.input.load(self.seed, self.csv)?;
        if self.dedup {
            dedup_ties(&cloud)
        } else {
            Ok((cloud, 0))
        }
    }
}

/// Runs one search; the breadth-first search draws from `seeded_rng(seed)`.
pub fn run_search(
    cloud: &PointCloud,
    tau: f64,
    algorithm: Algorithm,
    seed: u64,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    match algorithm {
        Algorithm::Naive => algorithm1(cloud, tau, options),
        Algorithm::Bfs => algorithm2(cloud, tau, &mut seeded_rng(seed), options),
    }
}

/// Search followed by polytope construction.
pub fn compute_region(
    cloud: &PointCloud,
    tau: f64,
    algorithm: Algorithm,
    seed: u64,
    options: &SearchOptions,
) -> Result<(RegionPolytope, SearchOutcome)> {
    let outcome = run_search(cloud, tau, algorithm, seed, options)?;
    let region = build_region(cloud, tau, &outcome.criticals, &options.tol)?;
    Ok((region, outcome))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub p: usize,
    pub tau: f64,
    pub k_tau: usize,
    pub algorithm: Algorithm,
    /// Number of critical directions found.
    pub directions: Option<usize>,
    pub wall_time_seconds: f64,
    pub status: Option<RegionStatus>,
    pub facets: Option<usize>,
    pub vertices: Option<usize>,
    pub seed: u64,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub ps: Vec<usize>,
    pub taus: Vec<f64>,
    pub algorithm: AlgorithmChoice,
    /// Repetition `r` uses data seed `seed + r`.
    pub repetitions: usize,
    pub seed: u64,
    /// Also build the polytope; its cost is included in the wall time.
    pub build_region: bool,
    pub options: SearchOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ns: vec![20, 40],
            ps: vec![3],
            taus: vec![0.05, 0.1],
            algorithm: AlgorithmChoice::Both,
            repetitions: 1,
            seed: 1,
            build_region: false,
            options: SearchOptions::default(),
        }
    }
}

/// Runs every grid cell sequentially. Failures are recorded, not raised.
/// Records are sorted by `(p, tau, n)`, then algorithm and seed.
pub fn run_benchmark(config: &BenchConfig) -> Vec<BenchRecord> {
    let mut records = Vec::new();
    for rep in 0..config.repetitions {
        let seed = config.seed.wrapping_add(rep as u64);
        for &p in &config.ps {
            for &n in &config.ns {
                let cloud = generate_gaussian(n, p, seed);
                for &tau in &config.taus {
                    for algorithm in config.algorithm.algorithms() {
                        let mut rec = BenchRecord {
                            n,
                            p,
                            tau,
                            k_tau: k_tau(n, tau).unwrap_or(0),
                            algorithm,
                            directions: None,
                            wall_time_seconds: 0.0,
                            status: None,
                            facets: None,
                            vertices: None,
                            seed,
                            error: None,
                        };
                        let cloud = match &cloud {
                            Ok(c) => c,
                            Err(e) => {
                                rec.error = Some(e.to_string());
                                records.push(rec);
                                continue;
                            }
                        };
                        let start = Instant::now();
                        let result = run_search(cloud, tau, algorithm, seed, &config.options)
                            .and_then(|out| {
                                let region = if config.build_region {
                                    Some(build_region(cloud, tau, &out.criticals, &config.options.tol)?)
                                } else {
                                    None
                                };
                                Ok((out, region))
                            });
                        rec.wall_time_seconds = start.elapsed().as_secs_f64();
                        match result {
                            Ok((out, region)) => {
                                rec.directions = Some(out.criticals.len());
                                if let Some(r) = region {
                                    rec.status = Some(r.status);
                                    rec.facets = Some(r.facets.len());
                                    rec.vertices = Some(r.vertices.len());
                                }
                            }
                            Err(e) => rec.error = Some(e.to_string()),
                        }
                        records.push(rec);
                    }
                }
            }
        }
    }
    records.sort_by(|a, b| {
        a.p.cmp(&b.p)
            .then(a.tau.total_cmp(&b.tau))
            .then(a.n.cmp(&b.n))
            .then(a.algorithm.cmp(&b.algorithm))
            .then(a.seed.cmp(&b.seed))
    });
    records
}
