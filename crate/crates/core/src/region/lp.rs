//! Chebyshev-slack LP: `max s` subject to `u_j · z - b_j >= s`.
//!
//! With `z = z0 + w+ - w-` and `s = smin + t`, where `smin` is the worst
//! slack at `z0`, every constraint becomes `-u_j·w+ + u_j·w- + t <= r_j` with
//! `r_j >= 0`. The origin is then feasible and a dictionary simplex with
//! Bland's rule runs without a phase one.

use crate::error::{Error, Result};
use crate::linalg::dot;

use super::Halfspace;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub point: Vec<f64>,
    /// `min_j (u_j · point - b_j)`, recomputed from the returned point.
    pub slack: f64,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-12;

/// Maximizes the minimum slack over all halfspaces.
pub fn max_min_slack(halfspaces: &[Halfspace], dim: usize) -> Result<LpSolution> {
    let m = halfspaces.len();
    if m < dim + 1 {
        return Err(Error::UnboundedLp(format!(
            "{m} halfspaces cannot bound a region in dimension {dim}"
        )));
    }
    let mut z0 = vec![0.0; dim];
    for h in halfspaces {
        for (zi, ui) in z0.iter_mut().zip(&h.normal) {
            *zi += h.offset * ui / m as f64;
        }
    }
    let slack_at = |z: &[f64]| {
        halfspaces
            .iter()
            .map(|h| dot(&h.normal, z) - h.offset)
            .fold(f64::INFINITY, f64::min)
    };
    let smin = slack_at(&z0);

    // Variables 0..dim: w+, dim..2dim: w-, 2dim: t; slacks are nv + j.
    let nv = 2 * dim + 1;
    let mut a: Vec<Vec<f64>> = halfspaces
        .iter()
        .map(|h| {
            let mut row = Vec::with_capacity(nv);
            row.extend(h.normal.iter().map(|u| -u));
            row.extend(h.normal.iter().copied());
            row.push(1.0);
            row
        })
        .collect();
    let mut r: Vec<f64> = halfspaces
        .iter()
        .map(|h| (dot(&h.normal, &z0) - h.offset - smin).max(0.0))
        .collect();
    let mut c = vec![0.0; nv];
    c[nv - 1] = 1.0;
    let mut nonbasic: Vec<usize> = (0..nv).collect();
    let mut basic: Vec<usize> = (nv..nv + m).collect();

    let mut pivots = 0;
    loop {
        // Bland: lowest-labelled improving variable enters.
        let entering = (0..nv)
            .filter(|&e| c[e] > PIVOT_EPS)
            .min_by_key(|&e| nonbasic[e]);
        let Some(e) = entering else { break };
        let mut leave: Option<(f64, usize)> = None;
        for i in 0..m {
            if a[i][e] > PIVOT_EPS {
                let ratio = r[i] / a[i][e];
                let better = match leave {
                    None => true,
                    Some((best, bi)) => {
                        ratio < best - 1e-15 * best.abs().max(1.0)
                            || (ratio <= best + 1e-15 * best.abs().max(1.0)
                                && basic[i] < basic[bi])
                    }
                };
                if better {
                    leave = Some((ratio, i));
                }
            }
        }
        let Some((_, i)) = leave else {
            return Err(Error::UnboundedLp(format!(
                "variable {} can grow without bound",
                nonbasic[e]
            )));
        };
        pivot(&mut a, &mut r, &mut c, i, e);
        std::mem::swap(&mut basic[i], &mut nonbasic[e]);
        pivots += 1;
    }

    let mut w = vec![0.0; nv];
    for (i, &var) in basic.iter().enumerate() {
        if var < nv {
            w[var] = r[i];
        }
    }
    let point: Vec<f64> = (0..dim).map(|j| z0[j] + w[j] - w[dim + j]).collect();
    let slack = slack_at(&point);
    Ok(LpSolution {
        point,
        slack,
        pivots,
    })
}

/// Exchanges basic row `i` with nonbasic column `e` in the dictionary
/// `x_B = r - A x_N`, objective `c · x_N`.
fn pivot(a: &mut [Vec<f64>], r: &mut [f64], c: &mut [f64], i: usize, e: usize) {
    let piv = a[i][e];
    for v in a[i].iter_mut() {
        *v /= piv;
    }
    a[i][e] = 1.0 / piv;
    r[i] /= piv;
    let (row_i, r_i) = (a[i].clone(), r[i]);
    for (k, row) in a.iter_mut().enumerate() {
        if k == i {
            continue;
        }
        let f = row[e];
        if f == 0.0 {
            continue;
        }
        for (j, v) in row.iter_mut().enumerate() {
            if j != e {
                *v -= f * row_i[j];
            }
        }
        row[e] = -f * row_i[e];
        r[k] = (r[k] - f * r_i).max(0.0);
    }
    let f = c[e];
    for (j, v) in c.iter_mut().enumerate() {
        if j != e {
            *v -= f * row_i[j];
        }
    }
    c[e] = -f * row_i[e];
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(normal: &[f64], offset: f64) -> Halfspace {
        Halfspace::new(normal.to_vec(), offset)
    }

    fn square_edges() -> Vec<Halfspace> {
        vec![
            hs(&[1.0, 0.0], 0.0),
            hs(&[-1.0, 0.0], -1.0),
            hs(&[0.0, 1.0], 0.0),
            hs(&[0.0, -1.0], -1.0),
        ]
    }

    #[test]
    fn square_center() {
        let sol = max_min_slack(&square_edges(), 2).unwrap();
        assert!((sol.slack - 0.5).abs() < 1e-12);
        assert!((sol.point[0] - 0.5).abs() < 1e-12);
        assert!((sol.point[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagonals_pin_a_point() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = vec![
            hs(&[-r, r], 0.0),
            hs(&[r, -r], 0.0),
            hs(&[r, r], r),
            hs(&[-r, -r], -r),
        ];
        let sol = max_min_slack(&h, 2).unwrap();
        assert!(sol.slack.abs() < 1e-12);
        assert!((sol.point[0] - 0.5).abs() < 1e-12);
        assert!((sol.point[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn infeasible_has_negative_slack() {
        let h = vec![
            hs(&[1.0, 0.0], 1.0),
            hs(&[-1.0, 0.0], 0.0),
            hs(&[0.0, 1.0], 0.0),
            hs(&[0.0, -1.0], -1.0),
        ];
        let sol = max_min_slack(&h, 2).unwrap();
        assert!((sol.slack + 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_constraints() {
        let h = vec![hs(&[1.0, 0.0], 0.0), hs(&[0.0, 1.0], 0.0)];
        assert!(matches!(max_min_slack(&h, 2), Err(Error::UnboundedLp(_))));
    }

    #[test]
    fn open_set_is_unbounded() {
        let h = vec![
            hs(&[1.0, 0.0], 0.0),
            hs(&[0.0, 1.0], 0.0),
            hs(&[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2], 0.0),
        ];
        assert!(matches!(max_min_slack(&h, 2), Err(Error::UnboundedLp(_))));
    }

    #[test]
    fn cube_center() {
        let mut h = Vec::new();
        for axis in 0..3 {
            let mut e = vec![0.0; 3];
            e[axis] = 1.0;
            h.push(hs(&e, -2.0));
            h.push(hs(&e.iter().map(|v| -v).collect::<Vec<_>>(), -4.0));
        }
        let sol = max_min_slack(&h, 3).unwrap();
        assert!((sol.slack - 3.0).abs() < 1e-12);
        for v in &sol.point {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
