//! Point clouds and the per-ridge planar reduction.
//!
//! Every ridge (p - 1 observations) spans an affine subspace of dimension
//! p - 2 whose orthogonal complement is a plane. Rotating a hyperplane around
//! the ridge corresponds to rotating a line through the origin of that plane,
//! so all hyperplanes through the ridge can be examined by sorting the polar
//! angles of the remaining observations projected into it.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{ColexSubsets, Ridge};
use crate::error::{Error, Result};
use crate::linalg::{self, binomial, dot};
use crate::tolerance::Tolerances;

/// `n` observations in R^p, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Builds a cloud from rows. Requires `n > p >= 2` and finite coordinates.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidCloud("no observations".into()))?;
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    row: i,
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidCloud(format!("dimension {dim} < 2")));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidCloud(format!(
                "{} coordinates do not form rows of length {dim}",
                coords.len()
            )));
        }
        let n = coords.len() / dim;
        if n <= dim {
            return Err(Error::InvalidCloud(format!(
                "need more observations than dimensions (n = {n}, p = {dim})"
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidCloud(format!(
                "non-finite coordinate in observation {}",
                pos / dim
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidCloud("too many observations".into()));
        }
        Ok(Self { dim, coords })
    }

    /// Number of observations `n`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Dimension `p`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    /// Largest absolute coordinate, at least 1. Used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.coords.iter().fold(1.0f64, |m, c| m.max(c.abs()))
    }

    /// `x -> A x + t` applied to every observation.
    pub fn map_affine(&self, matrix: &[Vec<f64>], shift: &[f64]) -> Result<Self> {
        let rows = self
            .points()
            .map(|x| {
                matrix
                    .iter()
                    .zip(shift)
                    .map(|(row, t)| dot(row, x) + t)
                    .collect()
            })
            .collect();
        Self::new(rows)
    }
}

/// Orthonormal basis `(e1, e2)` of the plane orthogonal to a ridge's affine hull.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementBasis {
    /// Index of the ridge point used as the origin of the plane.
    pub origin_index: usize,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

/// Which open half-turn of the plane a lifted normal cuts off.
///
/// `Ccw` cuts off the angles in `(θ, θ + π)`, `Cw` those in `(θ - π, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arc {
    Ccw,
    Cw,
}

/// Basis of the orthogonal complement of the span of `x_ik - x_i1`.
///
/// Gram-Schmidt on the ridge differences, completed to a full frame; the last
/// two frame vectors are returned. For `p = 2` the ridge is a single point and
/// the result is an orthonormal basis of R^2.
pub fn complement_basis(cloud: &PointCloud, ridge: &Ridge, tol: &Tolerances) -> Result<ComplementBasis> {
    let p = cloud.dim();
    let idx = ridge.indices();
    if idx.len() + 1 != p {
        return Err(Error::InvalidCloud(format!(
            "ridge has {} indices, expected {}",
            idx.len(),
            p - 1
        )));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= cloud.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            n: cloud.len(),
        });
    }
    let origin = cloud.point(idx[0]);
    let diffs: Vec<Vec<f64>> = idx[1..]
        .iter()
        .map(|&i| linalg::sub(cloud.point(i), origin))
        .collect();
    let span = linalg::orthonormalize(&diffs, tol.zero).map_err(|_| Error::RankDeficient {
        ridge: idx.to_vec(),
    })?;
    let mut frame = linalg::complete_frame(&span, p);
    let e2 = frame.pop().expect("frame has p >= 2 vectors");
    let e1 = frame.pop().expect("frame has p >= 2 vectors");
    Ok(ComplementBasis {
        origin_index: idx[0],
        e1,
        e2,
    })
}

/// Coordinates of `x_k - x_origin` in the complement plane, for every `k` off the ridge.
pub(crate) fn project_off_ridge(
    cloud: &PointCloud,
    ridge: &Ridge,
    basis: &ComplementBasis,
    tol: &Tolerances,
) -> Result<Vec<(usize, f64, f64)>> {
    let origin = cloud.point(basis.origin_index);
    let p = cloud.dim();
    let mut diff = vec![0.0; p];
    let mut out = Vec::with_capacity(cloud.len() + 1 - p);
    let mut ridge_iter = ridge.indices().iter().peekable();
    for k in 0..cloud.len() {
        if ridge_iter.peek() == Some(&&k) {
            ridge_iter.next();
            continue;
        }
        for (d, (a, b)) in diff.iter_mut().zip(cloud.point(k).iter().zip(origin)) {
            *d = a - b;
        }
        let x = dot(&diff, &basis.e1);
        let y = dot(&diff, &basis.e2);
        if x.hypot(y) < tol.zero {
            return Err(Error::DegenerateProjection {
                ridge: ridge.indices().to_vec(),
                index: k,
            });
        }
        out.push((k, x, y));
    }
    Ok(out)
}

/// Maps an `atan2` result into the half-open range `[-π, π)`.
#[inline]
pub(crate) fn canonical_angle(theta: f64) -> f64 {
    if theta >= PI {
        theta - 2.0 * PI
    } else {
        theta
    }
}

/// Polar angle in `[-π, π)` of every off-ridge observation, by ascending index.
pub fn polar_angles(
    cloud: &PointCloud,
    ridge: &Ridge,
    basis: &ComplementBasis,
    tol: &Tolerances,
) -> Result<Vec<(usize, f64)>> {
    Ok(project_off_ridge(cloud, ridge, basis, tol)?
        .into_iter()
        .map(|(k, x, y)| (k, canonical_angle(y.atan2(x))))
        .collect())
}

/// Unit normal in the complement plane, a quarter turn from `theta`.
///
/// The result is orthogonal to the ridge and to the direction at `theta`;
/// observations whose angle lies strictly inside the arc chosen by `arc`
/// have a negative inner product with it.
pub fn lift_direction(basis: &ComplementBasis, theta: f64, arc: Arc) -> Vec<f64> {
    let phi = match arc {
        Arc::Ccw => theta - PI / 2.0,
        Arc::Cw => theta + PI / 2.0,
    };
    let (s, c) = phi.sin_cos();
    basis
        .e1
        .iter()
        .zip(&basis.e2)
        .map(|(a, b)| c * a + s * b)
        .collect()
}

/// How a subset of observations breaks general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The `p` observations are affinely dependent.
    AffinelyDependent { tuple: Vec<usize> },
    /// The hyperplane through `tuple` also contains `point`.
    ExtraPointOnHyperplane { tuple: Vec<usize>, point: usize },
}

#[derive(Clone, Debug)]
pub struct GeneralPositionReport {
    pub exhaustive: bool,
    pub subsets_checked: u128,
    pub violation_count: u64,
    /// First violations found (bounded list).
    pub violations: Vec<Violation>,
}

impl GeneralPositionReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GeneralPositionOptions {
    /// Exhaustive check when `C(n, p)` is at most this.
    pub cap: u128,
    /// Number of random `p`-subsets examined otherwise.
    pub samples: usize,
    pub seed: u64,
    /// Maximum number of violations kept in the report.
    pub max_listed: usize,
}

impl Default for GeneralPositionOptions {
    fn default() -> Self {
        Self {
            cap: 2_000_000,
            samples: 20_000,
            seed: 0,
            max_listed: 64,
        }
    }
}

/// Checks that no hyperplane through `p` observations contains another one.
///
/// Violations are reported, never raised.
pub fn check_general_position(
    cloud: &PointCloud,
    options: &GeneralPositionOptions,
    tol: &Tolerances,
) -> GeneralPositionReport {
    let n = cloud.len();
    let p = cloud.dim();
    let total = binomial(n as u64, p as u64);
    let mut report = GeneralPositionReport {
        exhaustive: total <= options.cap,
        subsets_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    let check = |tuple: &[usize], report: &mut GeneralPositionReport| {
        report.subsets_checked += 1;
        let pts: Vec<&[f64]> = tuple.iter().map(|&i| cloud.point(i)).collect();
        let mut found = Vec::new();
        match linalg::hyperplane_through(&pts, tol.zero) {
            None => found.push(Violation::AffinelyDependent {
                tuple: tuple.to_vec(),
            }),
            Some((normal, offset)) => {
                for j in (0..n).filter(|j| !tuple.contains(j)) {
                    if (dot(&normal, cloud.point(j)) - offset).abs() <= tol.geom {
                        found.push(Violation::ExtraPointOnHyperplane {
                            tuple: tuple.to_vec(),
                            point: j,
                        });
                    }
                }
            }
        }
        for v in found {
            report.violation_count += 1;
            if report.violations.len() < options.max_listed {
                report.violations.push(v);
            }
        }
    };
    if report.exhaustive {
        for tuple in ColexSubsets::new(n, p) {
            check(&tuple, &mut report);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        for _ in 0..options.samples {
            let mut tuple = sample(&mut rng, n, p).into_vec();
            tuple.sort_unstable();
            check(&tuple, &mut report);
        }
    }
    report
}
