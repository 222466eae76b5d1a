//! The trimmed region as an explicit polytope.
//!
//! Each critical hyperplane contributes the closed halfspace on its kept
//! side. The LP in [`lp`] classifies the intersection (empty, a lower
//! dimensional set, or full-dimensional) and supplies an interior point;
//! vertices and facets then come from the convex hull of the polar dual.

pub mod hull;
pub mod lp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::linalg::{self, binomial, dot};
use crate::search::{k_tau, CriticalSet, Side};
use crate::tolerance::Tolerances;

pub use hull::{convex_hull, ConvexHull, HullFacet, SimplexFacet};
pub use lp::{max_min_slack, LpSolution};

/// `{z : normal · z >= offset}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Originating tuple (0-based, sorted) and side, when built from a search.
    pub source: Option<(Vec<usize>, Side)>,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self {
            normal,
            offset,
            source: None,
        }
    }

    pub fn slack(&self, z: &[f64]) -> f64 {
        dot(&self.normal, z) - self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionStatus {
    Empty,
    Degenerate,
    FullDim,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    /// Indices into [`RegionPolytope::vertices`], sorted.
    pub vertices: Vec<usize>,
    /// Index into [`RegionPolytope::halfspaces`] of the supporting halfspace.
    pub halfspace: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionPolytope {
    pub n: usize,
    pub dim: usize,
    pub tau: f64,
    pub k_tau: usize,
    pub halfspaces: Vec<Halfspace>,
    /// `redundant[j]`: halfspace `j` supports no facet.
    pub redundant: Vec<bool>,
    pub status: RegionStatus,
    /// LP optimum; `None` when the region is empty.
    pub interior_point: Option<Vec<f64>>,
    pub chebyshev_slack: f64,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

impl RegionPolytope {
    /// Smallest slack of `x` over all halfspaces.
    pub fn min_slack(&self, x: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.slack(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Classifies `x` against every halfspace with tolerance `tol`.
pub fn contains(region: &RegionPolytope, x: &[f64], tol: f64) -> Membership {
    if region.status == RegionStatus::Empty {
        return Membership::Outside;
    }
    let s = region.min_slack(x);
    if s > tol {
        Membership::Inside
    } else if s >= -tol {
        Membership::Boundary
    } else {
        Membership::Outside
    }
}

/// One halfspace per critical hyperplane, offsets checked against every tuple point.
pub fn build_halfspaces(
    cloud: &PointCloud,
    criticals: &CriticalSet,
    tol: &Tolerances,
) -> Result<Vec<Halfspace>> {
    let limit = tol.geom * cloud.scale();
    criticals
        .iter()
        .map(|c| {
            let values: Vec<f64> = c.tuple.iter().map(|&j| dot(&c.normal, cloud.point(j))).collect();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > limit {
                return Err(Error::InconsistentOffset {
                    tuple: c.tuple.clone(),
                    spread: hi - lo,
                });
            }
            Ok(Halfspace {
                normal: c.normal.clone(),
                offset: c.offset,
                source: Some((c.tuple.clone(), c.side)),
            })
        })
        .collect()
}

/// Interior point of the halfspace intersection with its status.
pub fn interior_point(
    halfspaces: &[Halfspace],
    dim: usize,
    tol: &Tolerances,
) -> Result<(Vec<f64>, f64, RegionStatus)> {
    let sol = max_min_slack(halfspaces, dim)?;
    let status = if sol.slack < -tol.slack {
        RegionStatus::Empty
    } else if sol.slack <= tol.slack {
        RegionStatus::Degenerate
    } else {
        RegionStatus::FullDim
    };
    Ok((sol.point, sol.slack, status))
}

/// Vertices, facets and redundancy flags of a full-dimensional intersection.
#[derive(Clone, Debug, PartialEq)]
pub struct Intersection {
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
    pub redundant: Vec<bool>,
}

/// Picks `dim` of `members` whose normals are best conditioned (pivoted Gram-Schmidt).
fn well_conditioned(halfspaces: &[Halfspace], members: &[usize], dim: usize) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(dim);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < dim {
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for &j in members {
            if chosen.contains(&j) {
                continue;
            }
            let mut r = halfspaces[j].normal.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&r, b);
                    linalg::axpy(&mut r, -c, b);
                }
            }
            let d = linalg::norm(&r);
            if best.as_ref().is_none_or(|(bd, _, _)| d > *bd) {
                best = Some((d, j, r));
            }
        }
        let Some((d, j, r)) = best else { break };
        if d > 0.0 {
            basis.push(linalg::scale(&r, 1.0 / d));
        }
        chosen.push(j);
    }
    chosen
}

/// Intersects `halfspaces` through the polar dual around the strictly
/// interior point `interior`.
pub fn halfspace_intersection(
    halfspaces: &[Halfspace],
    interior: &[f64],
    tol: &Tolerances,
) -> Result<Intersection> {
    let dim = interior.len();
    // With y = z - interior the constraint reads e_j · y <= 1, e_j = u_j / b'_j.
    let shifted: Vec<f64> = halfspaces
        .iter()
        .map(|h| h.offset - dot(&h.normal, interior))
        .collect();
    if let Some(j) = shifted.iter().position(|&b| !(b < 0.0)) {
        return Err(Error::NumericalDegeneracy(format!(
            "interior point is not strictly inside halfspace {j}"
        )));
    }
    let dual: Vec<Vec<f64>> = halfspaces
        .iter()
        .zip(&shifted)
        .map(|(h, &b)| linalg::scale(&h.normal, 1.0 / b))
        .collect();
    let hull = convex_hull(&dual, tol.geom, tol.merge_angle)?;

    let scale = interior
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let mut raw: Vec<Vec<f64>> = Vec::with_capacity(hull.facets.len());
    for facet in &hull.facets {
        let pick = well_conditioned(halfspaces, &facet.vertices, dim);
        let a: Vec<Vec<f64>> = pick.iter().map(|&j| halfspaces[j].normal.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&j| shifted[j]).collect();
        let y = linalg::solve(a, b, 1e-10).ok_or_else(|| {
            Error::NumericalDegeneracy(format!("singular vertex system for halfspaces {pick:?}"))
        })?;
        raw.push(linalg::add(&y, interior));
    }

    // Deduplicate, then order lexicographically.
    let merge = tol.vertex * scale;
    let mut unique: Vec<Vec<f64>> = Vec::new();
    let mut of_facet = Vec::with_capacity(raw.len());
    for v in raw {
        let hit = unique.iter().position(|u| {
            u.iter().zip(&v).all(|(a, b)| (a - b).abs() <= merge)
        });
        of_facet.push(hit.unwrap_or_else(|| {
            unique.push(v);
            unique.len() - 1
        }));
    }
    let mut order: Vec<usize> = (0..unique.len()).collect();
    order.sort_by(|&a, &b| {
        unique[a]
            .iter()
            .zip(&unique[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut rank = vec![0; unique.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let vertices: Vec<Vec<f64>> = order.iter().map(|&i| unique[i].clone()).collect();

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); halfspaces.len()];
    for (f, facet) in hull.facets.iter().enumerate() {
        for &j in &facet.vertices {
            incident[j].push(rank[of_facet[f]]);
        }
    }
    let mut redundant = vec![true; halfspaces.len()];
    let mut facets = Vec::new();
    for (j, mut verts) in incident.into_iter().enumerate() {
        verts.sort_unstable();
        verts.dedup();
        if verts.len() < dim || affine_rank(&vertices, &verts) + 1 < dim {
            continue;
        }
        redundant[j] = false;
        facets.push(Facet {
            vertices: verts,
            halfspace: j,
        });
    }
    Ok(Intersection {
        vertices,
        facets,
        redundant,
    })
}

fn affine_rank(points: &[Vec<f64>], idx: &[usize]) -> usize {
    let origin = &points[idx[0]];
    let diffs: Vec<Vec<f64>> = idx[1..].iter().map(|&i| linalg::sub(&points[i], origin)).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for d in diffs {
        let mut r = d.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                linalg::axpy(&mut r, -c, b);
            }
        }
        let len = linalg::norm(&r);
        if len > 1e-9 * linalg::norm(&d).max(1.0) {
            basis.push(linalg::scale(&r, 1.0 / len));
        }
    }
    basis.len()
}

/// Assembles the region for level `tau` from a critical set.
pub fn build_region(
    cloud: &PointCloud,
    tau: f64,
    criticals: &CriticalSet,
    tol: &Tolerances,
) -> Result<RegionPolytope> {
    let n = cloud.len();
    let dim = cloud.dim();
    let k = k_tau(n, tau)?;
    let halfspaces = build_halfspaces(cloud, criticals, tol)?;
    let (point, slack, status) = interior_point(&halfspaces, dim, tol)?;
    let mut region = RegionPolytope {
        n,
        dim,
        tau,
        k_tau: k,
        redundant: vec![false; halfspaces.len()],
        halfspaces,
        status,
        interior_point: (status != RegionStatus::Empty).then_some(point),
        chebyshev_slack: slack,
        vertices: Vec::new(),
        facets: Vec::new(),
    };
    if status == RegionStatus::FullDim {
        let interior = region.interior_point.as_ref().expect("set for FullDim");
        let cut = halfspace_intersection(&region.halfspaces, interior, tol)?;
        region.vertices = cut.vertices;
        region.facets = cut.facets;
        region.redundant = cut.redundant;
    }
    Ok(region)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorollaryCheck {
    pub count: usize,
    /// `2 C(n, p - 1)`.
    pub bound: u128,
    pub passed: bool,
    /// `bound - count`, negative on failure.
    pub margin: i128,
}

/// Checks `count <= 2 C(n, p - 1)`.
pub fn check_corollary_bound(n: usize, p: usize, count: usize) -> CorollaryCheck {
    let bound = binomial(n as u64, (p - 1) as u64).saturating_mul(2);
    let margin = if bound > i128::MAX as u128 {
        i128::MAX
    } else {
        bound as i128 - count as i128
    };
    CorollaryCheck {
        count,
        bound,
        passed: count as u128 <= bound,
        margin,
    }
}
