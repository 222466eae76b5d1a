//! Brute-force checks that do not share code paths with the searches.
//!
//! Exact depth uses `depth(x) = (n - h(x)) / n`, where `h(x)` is the largest
//! number of vectors `x_i - x` inside one open halfspace through the origin.
//! An optimal open halfspace can be rotated until its boundary contains
//! `r - 1` independent vectors (`r` the rank); the vectors then left on the
//! boundary are resolved by recursing inside it. This handles points lying
//! on many observation hyperplanes, such as region vertices, exactly.

use rand::Rng;

use crate::combinatorics::ColexSubsets;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::io::random_unit_vector;
use crate::linalg::{self, binomial, dot};
use crate::region::{check_corollary_bound, convex_hull, RegionPolytope, RegionStatus};
use crate::tolerance::Tolerances;

pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutCount {
    pub below: usize,
    pub on: usize,
    pub above: usize,
}

/// Classifies every `u · x_i` against `b` with tolerance `tol`.
pub fn cutoff_count(cloud: &PointCloud, u: &[f64], b: f64, tol: f64) -> CutCount {
    let mut c = CutCount {
        below: 0,
        on: 0,
        above: 0,
    };
    for x in cloud.points() {
        let v = dot(u, x);
        if v < b - tol {
            c.below += 1;
        } else if v <= b + tol {
            c.on += 1;
        } else {
            c.above += 1;
        }
    }
    c
}

/// Coordinates of `vs` in an orthonormal basis of their span.
fn reduce_to_span(vs: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                linalg::axpy(&mut r, -c, b);
            }
        }
        let len = linalg::norm(&r);
        if len > tol {
            basis.push(linalg::scale(&r, 1.0 / len));
        }
    }
    vs.iter()
        .map(|v| basis.iter().map(|b| dot(v, b)).collect())
        .collect()
}

/// Largest number of `vs` strictly inside one open halfspace through the origin.
fn max_open_halfspace(vs: &[Vec<f64>], tol: f64) -> usize {
    let nonzero: Vec<Vec<f64>> = vs.iter().filter(|v| linalg::norm(v) > tol).cloned().collect();
    if nonzero.is_empty() {
        return 0;
    }
    let coords = reduce_to_span(&nonzero, tol);
    let r = coords[0].len();
    if r == 1 {
        let pos = coords.iter().filter(|c| c[0] > 0.0).count();
        return pos.max(coords.len() - pos);
    }
    if coords.len() == r {
        return r;
    }
    let mut best = 0;
    for subset in ColexSubsets::new(coords.len(), r - 1) {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&i| coords[i].clone()).collect();
        let normal = linalg::cofactor_normal(&rows);
        let len = linalg::norm(&normal);
        let size = rows.iter().map(|r| linalg::norm(r)).product::<f64>();
        if len <= 1e-12 * size {
            continue;
        }
        let v = linalg::scale(&normal, 1.0 / len);
        let proj: Vec<f64> = coords.iter().map(|c| dot(&v, c)).collect();
        let zero: Vec<Vec<f64>> = coords
            .iter()
            .zip(&proj)
            .filter(|(_, &t)| t.abs() <= tol)
            .map(|(c, &t)| {
                let mut w = c.clone();
                linalg::axpy(&mut w, -t, &v);
                w
            })
            .collect();
        let pos = proj.iter().filter(|&&t| t > tol).count();
        let neg = proj.iter().filter(|&&t| t < -tol).count();
        if pos.max(neg) + zero.len() <= best {
            continue;
        }
        let inner = max_open_halfspace(&zero, tol);
        best = best.max(pos.max(neg) + inner);
    }
    best
}

/// Exact Tukey depth count `n * depth(x)`, for instances with
/// `C(n, p - 1) <= cap`.
pub fn depth_count_exact(cloud: &PointCloud, x: &[f64], cap: u128, tol: f64) -> Result<usize> {
    let n = cloud.len();
    let count = binomial(n as u64, (cloud.dim() - 1) as u64);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let scaled = tol * cloud.scale().max(x.iter().fold(1.0, |m: f64, v| m.max(v.abs())));
    let ys: Vec<Vec<f64>> = cloud.points().map(|p| linalg::sub(p, x)).collect();
    Ok(n - max_open_halfspace(&ys, scaled))
}

/// Exact Tukey depth of `x`, in `{0, 1/n, ..., 1}`.
pub fn depth_exact_small(cloud: &PointCloud, x: &[f64], cap: u128, tol: f64) -> Result<f64> {
    Ok(depth_count_exact(cloud, x, cap, tol)? as f64 / cloud.len() as f64)
}

/// Depth tally `#{i : u · x_i <= u · x} / n` for one direction.
pub fn directional_depth(cloud: &PointCloud, x: &[f64], u: &[f64]) -> f64 {
    let ux = dot(u, x);
    cloud.points().filter(|p| dot(u, p) <= ux).count() as f64 / cloud.len() as f64
}

/// Minimum of the directional tally over `m` random directions; never below the true depth.
pub fn depth_upper_bound<R: Rng + ?Sized>(cloud: &PointCloud, x: &[f64], m: usize, rng: &mut R) -> f64 {
    (0..m.max(1))
        .map(|_| directional_depth(cloud, x, &random_unit_vector(rng, cloud.dim())))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerifyReport {
    pub entries: Vec<CheckEntry>,
    /// Halfspaces whose cut count is off.
    pub failed_halfspaces: Vec<usize>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.entries.push(CheckEntry {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions<'a> {
    pub tol: Tolerances,
    pub oracle_cap: u128,
    /// Region at a lower level that must contain this one.
    pub coarser: Option<&'a RegionPolytope>,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            oracle_cap: DEFAULT_ORACLE_CAP,
            coarser: None,
        }
    }
}

/// Points that stand for the region: its vertices, or the LP point when it
/// has none.
fn representatives(region: &RegionPolytope) -> Vec<Vec<f64>> {
    match region.status {
        RegionStatus::FullDim => region.vertices.clone(),
        RegionStatus::Degenerate => region.interior_point.iter().cloned().collect(),
        RegionStatus::Empty => Vec::new(),
    }
}

/// Recomputes every certificate available for `region`.
pub fn verify_region(cloud: &PointCloud, region: &RegionPolytope, options: &VerifyOptions) -> VerifyReport {
    let tol = options.tol;
    let n = cloud.len();
    let p = cloud.dim();
    let k = region.k_tau;
    let mut report = VerifyReport::default();

    let geom = tol.geom * cloud.scale();
    for (j, h) in region.halfspaces.iter().enumerate() {
        let c = cutoff_count(cloud, &h.normal, h.offset, geom);
        if c.below + 1 != k || c.on != p {
            report.failed_halfspaces.push(j);
        }
    }
    let bad = &report.failed_halfspaces;
    report.push(
        "cut-count",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} halfspaces cut off {} points", region.halfspaces.len(), k - 1)
        } else {
            format!("halfspaces {bad:?} do not cut off exactly {} points", k - 1)
        },
    );

    let bound = check_corollary_bound(n, p, region.halfspaces.len());
    report.push(
        "direction-bound",
        bound.passed,
        format!("{} <= {} (margin {})", bound.count, bound.bound, bound.margin),
    );

    if region.status == RegionStatus::FullDim {
        let worst = region
            .vertices
            .iter()
            .map(|v| region.min_slack(v))
            .fold(f64::INFINITY, f64::min);
        report.push(
            "envelope",
            worst >= -tol.vertex,
            format!("worst vertex slack {worst:.3e}"),
        );
    }

    if k == 1 && region.status == RegionStatus::FullDim {
        match convex_hull(&cloud.rows(), tol.geom, tol.merge_angle) {
            Ok(hull) => {
                let mut expected: Vec<Vec<f64>> =
                    hull.vertices.iter().map(|&i| cloud.point(i).to_vec()).collect();
                expected.sort_by(|a, b| lex(a, b));
                let ok = expected.len() == region.vertices.len()
                    && expected.iter().zip(&region.vertices).all(|(a, b)| {
                        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol.geom * cloud.scale())
                    });
                report.push(
                    "hull-recovery",
                    ok,
                    format!("{} hull vertices, {} region vertices", expected.len(), region.vertices.len()),
                );
            }
            Err(e) => report.push("hull-recovery", false, e.to_string()),
        }
    }

    let reps = representatives(region);
    if !reps.is_empty() {
        let mut lowest = usize::MAX;
        let mut skipped = None;
        for v in &reps {
            match depth_count_exact(cloud, v, options.oracle_cap, tol.geom) {
                Ok(d) => lowest = lowest.min(d),
                Err(e) => {
                    skipped = Some(e.to_string());
                    break;
                }
            }
        }
        match skipped {
            Some(reason) => report.push("vertex-depth", true, format!("skipped: {reason}")),
            None => report.push(
                "vertex-depth",
                lowest >= k,
                format!("minimum depth {lowest}/{n}, required {k}/{n}"),
            ),
        }
    }

    if let Some(outer) = options.coarser {
        let limit = tol.geom * cloud.scale();
        let worst = reps
            .iter()
            .map(|v| outer.min_slack(v))
            .fold(f64::INFINITY, f64::min);
        let ok = outer.status != RegionStatus::Empty && (reps.is_empty() || worst >= -limit);
        report.push(
            "nesting",
            ok,
            format!("level {} inside level {}: worst slack {worst:.3e}", region.tau, outer.tau),
        );
    }
    report
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
