//! Critical-hyperplane search.
//!
//! A hyperplane through `p` observations is *critical* at level `τ` when one
//! of its open sides holds exactly `k_τ - 1` observations (see [`k_tau`]). The intersection
//! of the closed halfspaces on the other side of every critical hyperplane is
//! the trimmed region. Two searches find them:
//!
//! * [`algorithm1`] scans every ridge (`C(n, p - 1)` of them);
//! * [`algorithm2`] starts from one critical hyperplane and walks from ridge
//!   to ridge, scanning only ridges of hyperplanes already found.
//!
//! Both return the same [`CriticalSet`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    encode_sorted, ColexSubsets, Ridge, RidgeQueue, TupleCode, VisitedSet,
    DEFAULT_VISITED_BUDGET,
};
use crate::error::{Error, Result};
use crate::geometry::{
    canonical_angle, complement_basis, lift_direction, project_off_ridge, Arc, PointCloud,
};
use crate::io::random_unit_vector;
use crate::linalg::{self, dot};
use crate::region::{check_corollary_bound, CorollaryCheck};
use crate::tolerance::Tolerances;

/// Orientation of a critical hyperplane relative to its tuple.
///
/// Every sorted tuple has a canonical normal `c` (the generalized cross
/// product of `x_j2 - x_j1, ..., x_jp - x_j1`). `Low` keeps `u = c / |c|`,
/// so the observations cut off are those with *low* projections on `c`;
/// `High` uses `u = -c / |c|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Low,
    High,
}

/// One enveloping halfspace `{z : normal · z >= offset}` through `p` observations.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalHyperplane {
    /// Sorted 0-based observation indices on the hyperplane.
    pub tuple: Vec<usize>,
    pub side: Side,
    /// Unit normal pointing into the kept side.
    pub normal: Vec<f64>,
    /// `normal · x_tuple[0]`.
    pub offset: f64,
}

impl CriticalHyperplane {
    /// Builds the hyperplane for `tuple` (sorted) with the canonical normal.
    pub fn from_tuple(cloud: &PointCloud, tuple: &[usize], side: Side) -> Result<Self> {
        let c = canonical_normal(cloud, tuple)?;
        let normal = match side {
            Side::Low => c,
            Side::High => c.into_iter().map(|v| -v).collect(),
        };
        let offset = dot(&normal, cloud.point(tuple[0]));
        Ok(Self {
            tuple: tuple.to_vec(),
            side,
            normal,
            offset,
        })
    }

    pub fn key(&self, n: usize) -> (TupleCode, Side) {
        (encode_sorted(&self.tuple, n), self.side)
    }
}

/// Unit cofactor normal of a sorted tuple.
fn canonical_normal(cloud: &PointCloud, tuple: &[usize]) -> Result<Vec<f64>> {
    let origin = cloud.point(tuple[0]);
    let rows: Vec<Vec<f64>> = tuple[1..]
        .iter()
        .map(|&i| linalg::sub(cloud.point(i), origin))
        .collect();
    let c = linalg::cofactor_normal(&rows);
    let len = linalg::norm(&c);
    let scale = rows.iter().map(|r| linalg::norm(r)).product::<f64>().max(f64::MIN_POSITIVE);
    if !(len > 1e-14 * scale) {
        return Err(Error::RankDeficient {
            ridge: tuple.to_vec(),
        });
    }
    Ok(linalg::scale(&c, 1.0 / len))
}

/// Critical hyperplanes keyed by `(tuple, side)`, iterated in key order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CriticalSet {
    n: usize,
    map: BTreeMap<(TupleCode, Side), CriticalHyperplane>,
}

impl CriticalSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            map: BTreeMap::new(),
        }
    }

    /// Adds `c` unless its `(tuple, side)` is present; returns whether it was added.
    pub fn insert(&mut self, c: CriticalHyperplane) -> bool {
        let key = c.key(self.n);
        if self.map.contains_key(&key) {
            return false;
        }
        self.map.insert(key, c);
        true
    }

    pub fn contains(&self, key: &(TupleCode, Side)) -> bool {
        self.map.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CriticalHyperplane> {
        self.map.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &(TupleCode, Side)> {
        self.map.keys()
    }

    /// Sorted list of `(tuple, side)` pairs.
    pub fn directions(&self) -> Vec<(Vec<usize>, Side)> {
        self.iter().map(|c| (c.tuple.clone(), c.side)).collect()
    }

    /// Same `(tuple, side)` pairs, ignoring the numeric normals.
    pub fn same_directions(&self, other: &CriticalSet) -> bool {
        self.map.len() == other.map.len() && self.keys().eq(other.keys())
    }
}

/// Order-statistic index of level `τ`: the smallest `k` with `k / n >= τ`.
///
/// Equals `⌊nτ⌋` whenever `nτ` is an integer. Levels below `1/n` are
/// rejected (the region would be unbounded). A relative slack of `1e-12`
/// absorbs rounding such as `10 * 0.3 = 3.0000000000000004`.
pub fn k_tau(n: usize, tau: f64) -> Result<usize> {
    if !(tau.is_finite() && tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidDepthLevel { tau, n });
    }
    let scaled = n as f64 * tau;
    if scaled * (1.0 + 1e-12) < 1.0 {
        return Err(Error::InvalidDepthLevel { tau, n });
    }
    let k = (scaled * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok(k.min(n))
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub tol: Tolerances,
    /// Largest dense visited bitset, in bits.
    pub visited_budget: u128,
    /// Random directions tried when seeding the breadth-first search.
    pub max_retries: usize,
    /// Scan ridges on the rayon pool. Results are identical to sequential runs.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            visited_budget: DEFAULT_VISITED_BUDGET,
            max_retries: 64,
            parallel: false,
        }
    }
}

/// Number of entries of `sorted` in the open arc `(t, t + π)` taken mod 2π.
fn count_open_half_turn(sorted: &[f64], t: f64) -> usize {
    let above = |v: f64| sorted.partition_point(|&a| a <= v);
    let below = |v: f64| sorted.partition_point(|&a| a < v);
    if t < 0.0 {
        below(t + PI) - above(t)
    } else {
        (sorted.len() - above(t)) + below(t - PI)
    }
}

/// Finds every critical hyperplane through `ridge`.
///
/// Each off-ridge observation `k` defines, with the ridge, one observation
/// hyperplane; its two open sides correspond to the two open half-turns
/// next to `k`'s polar angle in the ridge's complement plane.
pub fn scan_ridge(
    cloud: &PointCloud,
    ridge: &Ridge,
    k_tau: usize,
    tol: &Tolerances,
) -> Result<Vec<CriticalHyperplane>> {
    let basis = complement_basis(cloud, ridge, tol)?;
    let projected = project_off_ridge(cloud, ridge, &basis, tol)?;
    let angles: Vec<(usize, f64)> = projected
        .iter()
        .map(|&(k, x, y)| (k, canonical_angle(y.atan2(x))))
        .collect();

    // Two off-ridge points on one line through the origin of the plane means
    // p + 1 observations on one hyperplane.
    let mut folded: Vec<(f64, usize)> = angles
        .iter()
        .map(|&(k, a)| (if a < 0.0 { a + PI } else { a }, k))
        .collect();
    folded.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    for i in 0..folded.len() {
        let next = if i + 1 < folded.len() {
            folded[i + 1].0
        } else {
            folded[0].0 + PI
        };
        if folded.len() > 1 && next - folded[i].0 < tol.angle {
            return Err(Error::DegenerateProjection {
                ridge: ridge.indices().to_vec(),
                index: folded[(i + 1) % folded.len()].1,
            });
        }
    }

    let mut sorted: Vec<f64> = angles.iter().map(|&(_, a)| a).collect();
    sorted.sort_unstable_by(f64::total_cmp);
    let others = angles.len() - 1;
    let target = k_tau - 1;

    let mut out = Vec::new();
    for &(k, theta) in &angles {
        let ccw = count_open_half_turn(&sorted, theta);
        let cw = others - ccw;
        for (count, arc) in [(ccw, Arc::Ccw), (cw, Arc::Cw)] {
            if count != target {
                continue;
            }
            let tuple = ridge.extend(k);
            let lifted = lift_direction(&basis, theta, arc);
            let mut c = CriticalHyperplane::from_tuple(cloud, &tuple, Side::Low)?;
            if dot(&lifted, &c.normal) < 0.0 {
                c = CriticalHyperplane::from_tuple(cloud, &tuple, Side::High)?;
            }
            out.push(c);
        }
    }
    Ok(out)
}

/// Summary of one search run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub criticals: CriticalSet,
    pub ridges_scanned: usize,
    /// Random directions drawn while seeding (0 for the exhaustive scan).
    pub seed_attempts: usize,
    /// Size check against `2 C(n, p - 1)`; a failure signals an internal inconsistency.
    pub bound: CorollaryCheck,
}

/// Exhaustive scan of all ridges in colexicographic order.
pub fn algorithm1(cloud: &PointCloud, tau: f64, options: &SearchOptions) -> Result<SearchOutcome> {
    let n = cloud.len();
    let p = cloud.dim();
    let k = k_tau(n, tau)?;
    let tol = options.tol;
    let mut set = CriticalSet::new(n);
    let mut scanned = 0;
    if options.parallel {
        let ridges: Vec<Vec<usize>> = ColexSubsets::new(n, p - 1).collect();
        scanned = ridges.len();
        let found: Vec<Vec<CriticalHyperplane>> = ridges
            .into_par_iter()
            .map(|r| scan_ridge(cloud, &Ridge::from_sorted(r), k, &tol))
            .collect::<Result<_>>()?;
        for c in found.into_iter().flatten() {
            set.insert(c);
        }
    } else {
        for r in ColexSubsets::new(n, p - 1) {
            scanned += 1;
            for c in scan_ridge(cloud, &Ridge::from_sorted(r), k, &tol)? {
                set.insert(c);
            }
        }
    }
    let bound = check_corollary_bound(n, p, set.len());
    Ok(SearchOutcome {
        criticals: set,
        ridges_scanned: scanned,
        seed_attempts: 0,
        bound,
    })
}

/// Bookkeeping of the breadth-first search.
#[derive(Clone, Debug)]
pub struct SearchState {
    pub visited: VisitedSet,
    pub queue: RidgeQueue,
    pub found: CriticalSet,
    pub k_tau: usize,
    pub seed_attempts: usize,
}

impl SearchState {
    fn push_if_new(&mut self, ridge: Ridge) {
        if self.visited.insert(&ridge) {
            self.queue.push(ridge);
        }
    }
}

/// Finds a first critical hyperplane and queues the ridges below it.
///
/// A random direction orders the observations; the ridge of the `p - 1`
/// lowest is scanned. On success every `(p - 1)`-subset of the observations
/// weakly below the first critical hyperplane found is queued.
pub fn seed_search<R: Rng + ?Sized>(
    cloud: &PointCloud,
    tau: f64,
    rng: &mut R,
    options: &SearchOptions,
) -> Result<SearchState> {
    let n = cloud.len();
    let p = cloud.dim();
    let k = k_tau(n, tau)?;
    let tol = options.tol;
    let mut state = SearchState {
        visited: VisitedSet::new(n, p - 1, options.visited_budget),
        queue: RidgeQueue::new(),
        found: CriticalSet::new(n),
        k_tau: k,
        seed_attempts: 0,
    };
    let tie_tol = tol.zero * cloud.scale();
    let mut tried = Vec::new();
    for _ in 0..options.max_retries.max(1) {
        let u0 = random_unit_vector(rng, p);
        state.seed_attempts += 1;
        let mut order: Vec<(f64, usize)> = cloud
            .points()
            .enumerate()
            .map(|(i, x)| (dot(&u0, x), i))
            .collect();
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if let Some(w) = order.windows(2).find(|w| w[1].0 - w[0].0 <= tie_tol) {
            return Err(Error::TiedProjection {
                first: w[0].1.min(w[1].1),
                second: w[0].1.max(w[1].1),
            });
        }
        let ridge = Ridge::new(order[..p - 1].iter().map(|&(_, i)| i).collect())?;
        let found = scan_ridge(cloud, &ridge, k, &tol)?;
        let Some(first) = found.first() else {
            tried.push(u0);
            continue;
        };
        let below: Vec<usize> = cloud
            .points()
            .enumerate()
            .filter(|(_, x)| dot(&first.normal, x) <= first.offset + tol.geom)
            .map(|(i, _)| i)
            .collect();
        for subset in ColexSubsets::new(below.len(), p - 1) {
            let ridge = Ridge::from_sorted(subset.into_iter().map(|i| below[i]).collect());
            state.push_if_new(ridge);
        }
        return Ok(state);
    }
    Err(Error::SeedingFailed {
        attempts: options.max_retries.max(1),
        directions: tried,
    })
}

/// Records the criticals found on `ridge` and queues their unvisited subridges
/// that contain the new observation.
fn absorb(state: &mut SearchState, ridge: &Ridge, found: Vec<CriticalHyperplane>) {
    for c in found {
        let tuple = c.tuple.clone();
        if !state.found.insert(c) {
            continue;
        }
        for &l in ridge.indices() {
            let sub: Vec<usize> = tuple.iter().copied().filter(|&i| i != l).collect();
            state.push_if_new(Ridge::from_sorted(sub));
        }
    }
}

/// Ridge-by-ridge breadth-first search.
pub fn algorithm2<R: Rng + ?Sized>(
    cloud: &PointCloud,
    tau: f64,
    rng: &mut R,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let mut state = seed_search(cloud, tau, rng, options)?;
    let k = state.k_tau;
    let tol = options.tol;
    let mut scanned = 0;
    if options.parallel {
        // Level-synchronous: scan the whole frontier, then absorb in FIFO order,
        // which reproduces the sequential visiting order exactly.
        while !state.queue.is_empty() {
            let frontier = state.queue.drain_all();
            scanned += frontier.len();
            let results: Vec<Vec<CriticalHyperplane>> = frontier
                .par_iter()
                .map(|r| scan_ridge(cloud, r, k, &tol))
                .collect::<Result<_>>()?;
            for (ridge, found) in frontier.iter().zip(results) {
                absorb(&mut state, ridge, found);
            }
        }
    } else {
        while let Some(ridge) = state.queue.pop() {
            scanned += 1;
            let found = scan_ridge(cloud, &ridge, k, &tol)?;
            absorb(&mut state, &ridge, found);
        }
    }
    let bound = check_corollary_bound(cloud.len(), cloud.dim(), state.found.len());
    Ok(SearchOutcome {
        criticals: state.found,
        ridges_scanned: scanned,
        seed_attempts: state.seed_attempts,
        bound,
    })
}
