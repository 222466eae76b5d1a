//! Incremental convex hull in any dimension.
//!
//! Quickhull with outside sets: start from a full-dimensional simplex, then
//! repeatedly add the furthest outside point of some facet, replacing the
//! facets it sees by a cone over the horizon. Facets are simplices; a final
//! pass merges coplanar neighbours.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{self, dot};

/// A simplicial facet. `neighbors[s]` shares every vertex but `vertices[s]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexFacet {
    pub vertices: Vec<usize>,
    /// Outward unit normal: `normal · x <= offset` inside.
    pub normal: Vec<f64>,
    pub offset: f64,
    pub neighbors: Vec<usize>,
}

/// Union of coplanar simplicial facets.
#[derive(Clone, Debug, PartialEq)]
pub struct HullFacet {
    /// Sorted point indices.
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Indices into [`ConvexHull::simplices`].
    pub simplices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexHull {
    pub dim: usize,
    pub simplices: Vec<SimplexFacet>,
    pub facets: Vec<HullFacet>,
    /// Sorted indices of the points on the hull.
    pub vertices: Vec<usize>,
    /// Absolute distance tolerance used (`tol * max(1, max |coord|)`).
    pub eps: f64,
}

impl ConvexHull {
    /// Largest signed distance of `x` outside any facet.
    pub fn max_excess(&self, x: &[f64]) -> f64 {
        self.simplices
            .iter()
            .map(|f| dot(&f.normal, x) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Work {
    vertices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    neighbors: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
}

fn plane(points: &[Vec<f64>], verts: &[usize], inside: &[f64]) -> (Vec<f64>, f64) {
    let o = &points[verts[0]];
    let rows: Vec<Vec<f64>> = verts[1..].iter().map(|&v| linalg::sub(&points[v], o)).collect();
    let mut n = linalg::cofactor_normal(&rows);
    let len = linalg::norm(&n);
    if len > 0.0 {
        n.iter_mut().for_each(|v| *v /= len);
    }
    let mut off = dot(&n, o);
    if dot(&n, inside) > off {
        n.iter_mut().for_each(|v| *v = -*v);
        off = -off;
    }
    (n, off)
}

/// Picks `dim + 1` affinely independent points greedily by residual distance.
fn initial_simplex(points: &[Vec<f64>], dim: usize, eps: f64) -> Result<Vec<usize>> {
    let lowest = (0..points.len())
        .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)))
        .expect("non-empty");
    let mut chosen = vec![lowest];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < dim + 1 {
        let origin = &points[chosen[0]];
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for (i, x) in points.iter().enumerate() {
            let mut r = linalg::sub(x, origin);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&r, b);
                    linalg::axpy(&mut r, -c, b);
                }
            }
            let d = linalg::norm(&r);
            if best.as_ref().is_none_or(|(bd, _, _)| d > *bd) {
                best = Some((d, i, r));
            }
        }
        let (d, i, r) = best.expect("non-empty");
        if d <= eps {
            return Err(Error::DegenerateInput {
                rank: chosen.len() - 1,
                dim,
            });
        }
        basis.push(linalg::scale(&r, 1.0 / d));
        chosen.push(i);
    }
    Ok(chosen)
}

/// Convex hull of `points` (all of length `dim`), with coplanarity tolerance
/// `tol` relative to the coordinate scale and normal-angle tolerance `merge_angle`.
pub fn convex_hull(points: &[Vec<f64>], tol: f64, merge_angle: f64) -> Result<ConvexHull> {
    let dim = points.first().map_or(0, Vec::len);
    if dim < 2 || points.len() < dim + 1 {
        return Err(Error::DegenerateInput {
            rank: points.len().saturating_sub(1).min(dim),
            dim,
        });
    }
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = tol * scale;
    let simplex = initial_simplex(points, dim, eps)?;
    let mut inside = vec![0.0; dim];
    for &v in &simplex {
        linalg::axpy(&mut inside, 1.0 / (dim + 1) as f64, &points[v]);
    }

    let mut facets: Vec<Work> = Vec::new();
    for skip in 0..=dim {
        let verts: Vec<usize> = (0..=dim).filter(|&i| i != skip).map(|i| simplex[i]).collect();
        let (normal, offset) = plane(points, &verts, &inside);
        facets.push(Work {
            vertices: verts,
            normal,
            offset,
            neighbors: vec![usize::MAX; dim],
            outside: Vec::new(),
            alive: true,
        });
    }
    link(&mut facets, &(0..=dim).collect::<Vec<_>>());

    let in_simplex = |i: usize| simplex.contains(&i);
    for i in 0..points.len() {
        if in_simplex(i) {
            continue;
        }
        if let Some(f) = facets
            .iter()
            .position(|f| dot(&f.normal, &points[i]) - f.offset > eps)
        {
            facets[f].outside.push(i);
        }
    }

    let mut cursor = 0;
    while cursor < facets.len() {
        if !facets[cursor].alive || facets[cursor].outside.is_empty() {
            cursor += 1;
            continue;
        }
        let start = cursor;
        let apex = {
            let f = &facets[start];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| {
                    let da = dot(&f.normal, &points[a]);
                    let db = dot(&f.normal, &points[b]);
                    da.total_cmp(&db).then(b.cmp(&a))
                })
                .expect("non-empty")
        };
        let apex_pt = &points[apex];

        let mut visible = vec![start];
        let mut is_visible: HashMap<usize, bool> = HashMap::from([(start, true)]);
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for s in 0..dim {
                let g = facets[f].neighbors[s];
                if is_visible.contains_key(&g) {
                    continue;
                }
                let vis = dot(&facets[g].normal, apex_pt) - facets[g].offset > eps;
                is_visible.insert(g, vis);
                if vis {
                    visible.push(g);
                }
            }
        }

        let mut created = Vec::new();
        for &f in &visible {
            for s in 0..dim {
                let g = facets[f].neighbors[s];
                if is_visible[&g] {
                    continue;
                }
                let mut verts: Vec<usize> = facets[f]
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != s)
                    .map(|(_, &v)| v)
                    .collect();
                verts.push(apex);
                let (normal, offset) = plane(points, &verts, &inside);
                let mut neighbors = vec![usize::MAX; dim];
                neighbors[dim - 1] = g;
                let id = facets.len();
                let slot = facets[g]
                    .neighbors
                    .iter()
                    .position(|&x| x == f)
                    .expect("adjacency is symmetric");
                facets[g].neighbors[slot] = id;
                facets.push(Work {
                    vertices: verts,
                    normal,
                    offset,
                    neighbors,
                    outside: Vec::new(),
                    alive: true,
                });
                created.push(id);
            }
        }
        link(&mut facets, &created);

        let mut orphans = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
        }
        for q in orphans {
            if q == apex {
                continue;
            }
            if let Some(&f) = created
                .iter()
                .find(|&&f| dot(&facets[f].normal, &points[q]) - facets[f].offset > eps)
            {
                facets[f].outside.push(q);
            }
        }
        cursor = cursor.min(start);
    }

    let mut remap = vec![usize::MAX; facets.len()];
    let mut simplices = Vec::new();
    for (i, f) in facets.iter().enumerate() {
        if f.alive {
            remap[i] = simplices.len();
            simplices.push(SimplexFacet {
                vertices: f.vertices.clone(),
                normal: f.normal.clone(),
                offset: f.offset,
                neighbors: Vec::new(),
            });
        }
    }
    for (i, f) in facets.iter().enumerate() {
        if f.alive {
            simplices[remap[i]].neighbors = f.neighbors.iter().map(|&g| remap[g]).collect();
        }
    }
    let merged = merge_coplanar(points, &simplices, eps, merge_angle);
    let mut vertices: Vec<usize> = simplices
        .iter()
        .flat_map(|f| f.vertices.iter().copied())
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    Ok(ConvexHull {
        dim,
        simplices,
        facets: merged,
        vertices,
        eps,
    })
}

/// Links the unmatched ridges of `ids` pairwise.
fn link(facets: &mut [Work], ids: &[usize]) {
    let mut open: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for &f in ids {
        let dim = facets[f].vertices.len();
        for s in 0..dim {
            if facets[f].neighbors[s] != usize::MAX {
                continue;
            }
            let mut key: Vec<usize> = facets[f]
                .vertices
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != s)
                .map(|(_, &v)| v)
                .collect();
            key.sort_unstable();
            if let Some((g, t)) = open.remove(&key) {
                facets[f].neighbors[s] = g;
                facets[g].neighbors[t] = f;
            } else {
                open.insert(key, (f, s));
            }
        }
    }
    debug_assert!(open.is_empty(), "unmatched ridges after linking");
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn merge_coplanar(
    points: &[Vec<f64>],
    simplices: &[SimplexFacet],
    eps: f64,
    merge_angle: f64,
) -> Vec<HullFacet> {
    let mut parent: Vec<usize> = (0..simplices.len()).collect();
    let on_plane = |f: &SimplexFacet, g: &SimplexFacet| {
        g.vertices
            .iter()
            .all(|&v| (dot(&f.normal, &points[v]) - f.offset).abs() <= eps)
    };
    for (i, f) in simplices.iter().enumerate() {
        for &j in &f.neighbors {
            if j <= i {
                continue;
            }
            let g = &simplices[j];
            let cos = dot(&f.normal, &g.normal).clamp(-1.0, 1.0);
            let angle_close = cos.acos() <= merge_angle && (f.offset - g.offset).abs() <= eps;
            if angle_close || (on_plane(f, g) && on_plane(g, f)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..simplices.len() {
        let r = find(&mut parent, i);
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
        .into_iter()
        .map(|members| {
            let dim = simplices[members[0]].normal.len();
            let mut normal = vec![0.0; dim];
            for &m in &members {
                linalg::axpy(&mut normal, 1.0, &simplices[m].normal);
            }
            let len = linalg::norm(&normal);
            normal.iter_mut().for_each(|v| *v /= len);
            let mut vertices: Vec<usize> = members
                .iter()
                .flat_map(|&m| simplices[m].vertices.iter().copied())
                .collect();
            vertices.sort_unstable();
            vertices.dedup();
            let offset = vertices
                .iter()
                .map(|&v| dot(&normal, &points[v]))
                .fold(f64::NEG_INFINITY, f64::max);
            HullFacet {
                vertices,
                normal,
                offset,
                simplices: members,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::generate_gaussian;

    fn check_adjacency(h: &ConvexHull) {
        for (i, f) in h.simplices.iter().enumerate() {
            for (s, &g) in f.neighbors.iter().enumerate() {
                let gf = &h.simplices[g];
                assert!(gf.neighbors.contains(&i));
                let shared = f
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != s)
                    .all(|(_, v)| gf.vertices.contains(v));
                assert!(shared);
            }
        }
    }

    #[test]
    fn square_edges() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        let h = convex_hull(&pts, 1e-9, 1e-8).unwrap();
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        check_adjacency(&h);
    }

    #[test]
    fn center_is_ignored() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let h = convex_hull(&pts, 1e-9, 1e-8).unwrap();
        assert_eq!(h.facets.len(), 4);
        assert!(!h.vertices.contains(&4));
    }

    #[test]
    fn cube_faces_merge() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        let h = convex_hull(&pts, 1e-9, 1e-8).unwrap();
        assert_eq!(h.simplices.len(), 12);
        assert_eq!(h.facets.len(), 6);
        assert!(h.facets.iter().all(|f| f.vertices.len() == 4));
        check_adjacency(&h);
    }

    #[test]
    fn gaussian_euler_relation() {
        let cloud = generate_gaussian(10, 3, 4).unwrap();
        let pts = cloud.rows();
        let h = convex_hull(&pts, 1e-9, 1e-8).unwrap();
        let f = h.simplices.len();
        assert_eq!(3 * f % 2, 0);
        let e = 3 * f / 2;
        let v = h.vertices.len();
        assert_eq!(v + f, e + 2);
        for x in &pts {
            assert!(h.max_excess(x) <= 1e-9);
        }
        check_adjacency(&h);
    }

    #[test]
    fn four_dimensional_simplex_hull() {
        let cloud = generate_gaussian(30, 4, 2).unwrap();
        let pts = cloud.rows();
        let h = convex_hull(&pts, 1e-9, 1e-8).unwrap();
        for x in &pts {
            assert!(h.max_excess(x) <= 1e-9);
        }
        for f in &h.simplices {
            for &v in &f.vertices {
                assert!((dot(&f.normal, &pts[v]) - f.offset).abs() <= 1e-9);
            }
        }
        check_adjacency(&h);
    }

    #[test]
    fn flat_input_rejected() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert!(matches!(
            convex_hull(&pts, 1e-9, 1e-8),
            Err(Error::DegenerateInput { rank: 2, dim: 3 })
        ));
    }
}
