//! Small dense linear-algebra helpers on `&[f64]` vectors.
//!
//! Dimensions here are tiny (the data dimension `p`), so everything is plain
//! loops over slices.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += s * x`
#[inline]
pub fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Removes from `v` its components along the orthonormal `basis` (two passes).
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(v, -c, b);
        }
    }
}

/// Modified Gram-Schmidt with re-orthogonalization.
///
/// Returns the orthonormal basis, or the index of the first vector whose
/// residual is at most `rel_tol * max(1, |v|)`.
pub fn orthonormalize(vectors: &[Vec<f64>], rel_tol: f64) -> Result<Vec<Vec<f64>>, usize> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let original = norm(v);
        let mut w = v.clone();
        project_out(&mut w, &basis);
        let r = norm(&w);
        if r <= rel_tol * original.max(1.0) {
            return Err(i);
        }
        basis.push(scale(&w, 1.0 / r));
    }
    Ok(basis)
}

/// Extends an orthonormal set to a full orthonormal frame of R^dim.
///
/// At each step the standard basis vector with the largest residual is
/// orthogonalized and appended, so the result is deterministic.
pub fn complete_frame(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut frame = basis.to_vec();
    while frame.len() < dim {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for axis in 0..dim {
            let mut e = vec![0.0; dim];
            e[axis] = 1.0;
            project_out(&mut e, &frame);
            let r = norm(&e);
            if best.as_ref().is_none_or(|(br, _)| r > *br) {
                best = Some((r, e));
            }
        }
        let (r, e) = best.expect("dim > 0");
        frame.push(scale(&e, 1.0 / r));
    }
    frame
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `pivot_tol` times the largest
/// entry of `a`.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, pivot_tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let amax = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    if amax == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= pivot_tol * amax {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Determinant by LU with partial pivoting.
pub fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Generalized cross product of `d - 1` vectors in R^d.
///
/// Component `j` is `(-1)^j` times the minor with column `j` removed; the
/// result is orthogonal to every input row and its orientation depends only
/// on the row order.
pub fn cofactor_normal(rows: &[Vec<f64>]) -> Vec<f64> {
    let d = rows.len() + 1;
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let m = if minor.is_empty() {
                1.0
            } else {
                determinant(minor)
            };
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// Unit normal and offset of the hyperplane through `points` (exactly `d` of
/// them in R^d). `None` if they are affinely dependent.
pub fn hyperplane_through(points: &[&[f64]], rel_tol: f64) -> Option<(Vec<f64>, f64)> {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|q| sub(q, points[0])).collect();
    let basis = orthonormalize(&diffs, rel_tol).ok()?;
    let frame = complete_frame(&basis, d);
    let normal = frame[d - 1].clone();
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(a, vec![3.0, 5.0], 1e-14).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14);
        assert!((x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_system_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(a, vec![1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn cofactor_normal_is_orthogonal() {
        let rows = vec![vec![1.0, 2.0, 0.5], vec![-0.3, 1.0, 2.0]];
        let c = cofactor_normal(&rows);
        for r in &rows {
            assert!(dot(&c, r).abs() < 1e-12);
        }
        assert!(norm(&c) > 0.1);
    }

    #[test]
    fn frame_completion_is_orthonormal() {
        let b = orthonormalize(&[vec![1.0, 1.0, 0.0, 0.0]], 1e-12).unwrap();
        let f = complete_frame(&b, 4);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&f[i], &f[j]) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(125, 2), 7750);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(80, 3), 82160);
    }
}
