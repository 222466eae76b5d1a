//! JSON, OFF and plain-table output.
//!
//! JSON floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every `f64` exactly. Observation indices are 1-based, vertex
//! indices in `facets` 0-based.

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::region::{Facet, Halfspace, RegionPolytope, RegionStatus};
use crate::search::Side;

use super::bench::BenchRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Off,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "off" => Ok(Self::Off),
            "table" => Ok(Self::Table),
            other => Err(Error::FormatUnsupported(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HalfspaceJson {
    tuple: Vec<usize>,
    side: Side,
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    n: usize,
    p: usize,
    tau: f64,
    k_tau: usize,
    status: RegionStatus,
    num_directions: usize,
    halfspaces: Vec<HalfspaceJson>,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Vec<usize>>,
    interior_point: Option<Vec<f64>>,
    chebyshev_slack: f64,
}

struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// One compact JSON object (no trailing newline).
pub fn region_to_json(region: &RegionPolytope) -> Result<String> {
    let doc = RegionJson {
        n: region.n,
        p: region.dim,
        tau: region.tau,
        k_tau: region.k_tau,
        status: region.status,
        num_directions: region.halfspaces.len(),
        halfspaces: region
            .halfspaces
            .iter()
            .map(|h| {
                let (tuple, side) = h.source.clone().ok_or_else(|| {
                    Error::FormatUnsupported("halfspace without originating tuple".into())
                })?;
                Ok(HalfspaceJson {
                    tuple: tuple.iter().map(|i| i + 1).collect(),
                    side,
                    normal: h.normal.clone(),
                    offset: h.offset,
                })
            })
            .collect::<Result<_>>()?,
        vertices: region.vertices.clone(),
        facets: region.facets.iter().map(|f| f.vertices.clone()).collect(),
        interior_point: region.interior_point.clone(),
        chebyshev_slack: region.chebyshev_slack,
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    doc.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Parses JSON Lines written by [`region_to_json`].
///
/// Facets are not stored with their halfspace; each is matched to the
/// halfspace whose boundary fits its vertices best. Halfspaces that support
/// no facet are marked redundant.
pub fn import_regions(text: &str) -> Result<Vec<RegionPolytope>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let doc: RegionJson = serde_json::from_str(line)?;
            let halfspaces: Vec<Halfspace> = doc
                .halfspaces
                .into_iter()
                .map(|h| Halfspace {
                    normal: h.normal,
                    offset: h.offset,
                    source: Some((h.tuple.iter().map(|i| i - 1).collect(), h.side)),
                })
                .collect();
            let mut redundant = vec![true; halfspaces.len()];
            let facets: Vec<Facet> = doc
                .facets
                .into_iter()
                .map(|verts| {
                    let fit = |h: &Halfspace| {
                        verts
                            .iter()
                            .map(|&v| h.slack(&doc.vertices[v]).abs())
                            .fold(0.0, f64::max)
                    };
                    let j = (0..halfspaces.len())
                        .min_by(|&a, &b| fit(&halfspaces[a]).total_cmp(&fit(&halfspaces[b])))
                        .unwrap_or(0);
                    redundant[j] = false;
                    Facet {
                        vertices: verts,
                        halfspace: j,
                    }
                })
                .collect();
            if doc.status != RegionStatus::FullDim {
                redundant.iter_mut().for_each(|r| *r = false);
            }
            Ok(RegionPolytope {
                n: doc.n,
                dim: doc.p,
                tau: doc.tau,
                k_tau: doc.k_tau,
                halfspaces,
                redundant,
                status: doc.status,
                interior_point: doc.interior_point,
                chebyshev_slack: doc.chebyshev_slack,
                vertices: doc.vertices,
                facets,
            })
        })
        .collect()
}

/// OFF mesh of a full-dimensional region in R^3, faces counter-clockwise
/// seen from outside.
pub fn off_string(region: &RegionPolytope) -> Result<String> {
    if region.dim != 3 {
        return Err(Error::FormatUnsupported(format!(
            "OFF needs p = 3, region has p = {}",
            region.dim
        )));
    }
    if region.status != RegionStatus::FullDim {
        return Err(Error::FormatUnsupported(format!(
            "OFF needs a full-dimensional region, status is {:?}",
            region.status
        )));
    }
    let faces: Vec<Vec<usize>> = region
        .facets
        .iter()
        .map(|f| {
            let outward: Vec<f64> = region.halfspaces[f.halfspace].normal.iter().map(|v| -v).collect();
            cyclic_order(&region.vertices, &f.vertices, &outward)
        })
        .collect();
    let edges: usize = faces.iter().map(Vec::len).sum::<usize>() / 2;
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} {}", region.vertices.len(), faces.len(), edges).unwrap();
    for v in &region.vertices {
        writeln!(s, "{} {} {}", v[0], v[1], v[2]).unwrap();
    }
    for f in &faces {
        write!(s, "{}", f.len()).unwrap();
        for i in f {
            write!(s, " {i}").unwrap();
        }
        s.push('\n');
    }
    Ok(s)
}

fn cyclic_order(vertices: &[Vec<f64>], face: &[usize], normal: &[f64]) -> Vec<usize> {
    let mut c = [0.0; 3];
    for &i in face {
        for k in 0..3 {
            c[k] += vertices[i][k] / face.len() as f64;
        }
    }
    let d0: Vec<f64> = (0..3).map(|k| vertices[face[0]][k] - c[k]).collect();
    let len = d0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e1: Vec<f64> = d0.iter().map(|x| x / len).collect();
    let e2 = [
        normal[1] * e1[2] - normal[2] * e1[1],
        normal[2] * e1[0] - normal[0] * e1[2],
        normal[0] * e1[1] - normal[1] * e1[0],
    ];
    let mut keyed: Vec<(f64, usize)> = face
        .iter()
        .map(|&i| {
            let d: Vec<f64> = (0..3).map(|k| vertices[i][k] - c[k]).collect();
            let x: f64 = d.iter().zip(&e1).map(|(a, b)| a * b).sum();
            let y: f64 = d.iter().zip(&e2).map(|(a, b)| a * b).sum();
            (y.atan2(x), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Aligned text table of benchmark records.
pub fn table_string(records: &[BenchRecord]) -> String {
    let header = [
        "n", "p", "tau", "k", "algorithm", "M", "seconds", "status", "facets", "vertices", "seed",
    ];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.p.to_string(),
                format!("{}", r.tau),
                r.k_tau.to_string(),
                r.algorithm.to_string(),
                r.directions.map_or("-".into(), |m| m.to_string()),
                format!("{:.4}", r.wall_time_seconds),
                match (&r.error, r.status) {
                    (Some(e), _) => format!("error: {e}"),
                    (None, Some(s)) => format!("{s:?}"),
                    (None, None) => "-".into(),
                },
                r.facets.map_or("-".into(), |v| v.to_string()),
                r.vertices.map_or("-".into(), |v| v.to_string()),
                r.seed.to_string(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut s = String::new();
    let line = |cells: &[String], s: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(s, "{}", parts.join("  ").trim_end()).unwrap();
    };
    line(&header.map(String::from), &mut s);
    for row in &rows {
        line(row, &mut s);
    }
    s
}

/// Serializes one region in `format`. `Table` gives a one-line summary.
pub fn export_region(region: &RegionPolytope, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => Ok((region_to_json(region)? + "\n").into_bytes()),
        OutputFormat::Off => Ok(off_string(region)?.into_bytes()),
        OutputFormat::Table => {
            let mut s = String::new();
            writeln!(
                s,
                "tau={} k={} status={:?} directions={} vertices={} facets={} slack={:.6e}",
                region.tau,
                region.k_tau,
                region.status,
                region.halfspaces.len(),
                region.vertices.len(),
                region.facets.len(),
                region.chebyshev_slack
            )
            .unwrap();
            Ok(s.into_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointCloud;
    use crate::io::generate_gaussian;
    use crate::region::build_region;
    use crate::search::{algorithm1, SearchOptions};
    use crate::tolerance::Tolerances;

    fn region(cloud: &PointCloud, tau: f64) -> RegionPolytope {
        let cs = algorithm1(cloud, tau, &SearchOptions::default()).unwrap().criticals;
        build_region(cloud, tau, &cs, &Tolerances::default()).unwrap()
    }

    fn square() -> PointCloud {
        PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn square_json() {
        let json = region_to_json(&region(&square(), 0.25)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["status"], "FullDim");
        assert_eq!(v["halfspaces"].as_array().unwrap().len(), 4);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["num_directions"], 4);
        assert_eq!(v["halfspaces"][0]["tuple"], serde_json::json!([1, 2]));
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert!(keys.contains(&"chebyshev_slack") && keys.contains(&"interior_point"));
        assert!(json.contains("5.0000000000000000e-1"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let cloud = generate_gaussian(20, 3, 9).unwrap();
        let r = region(&cloud, 0.1);
        let back = import_regions(&region_to_json(&r).unwrap()).unwrap();
        assert_eq!(back.len(), 1);
        let b = &back[0];
        assert_eq!(b.vertices, r.vertices);
        assert_eq!(b.halfspaces, r.halfspaces);
        assert_eq!(b.facets, r.facets);
        assert_eq!(b.chebyshev_slack.to_bits(), r.chebyshev_slack.to_bits());
        assert_eq!(region_to_json(b).unwrap(), region_to_json(&r).unwrap());
    }

    #[test]
    fn degenerate_json_and_off() {
        let r = region(&square(), 0.5);
        let v: serde_json::Value = serde_json::from_str(&region_to_json(&r).unwrap()).unwrap();
        assert_eq!(v["vertices"], serde_json::json!([]));
        assert!(v["interior_point"].is_array());
        assert!(matches!(off_string(&r), Err(Error::FormatUnsupported(_))));
        let empty = region(&square(), 0.6);
        let v: serde_json::Value = serde_json::from_str(&region_to_json(&empty).unwrap()).unwrap();
        assert!(v["interior_point"].is_null());
    }

    #[test]
    fn off_matches_json() {
        let cloud = generate_gaussian(20, 3, 4).unwrap();
        let r = region(&cloud, 0.1);
        let off = off_string(&r).unwrap();
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        let counts: Vec<usize> = lines
            .next()
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(counts[0], r.vertices.len());
        assert_eq!(counts[1], r.facets.len());
        assert_eq!(counts[0] + counts[1], counts[2] + 2);
        let face_sizes: usize = off
            .lines()
            .skip(2 + counts[0])
            .map(|l| l.split_whitespace().next().unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(face_sizes, 2 * counts[2]);
        assert!(matches!(off_string(&region(&square(), 0.25)), Err(Error::FormatUnsupported(_))));
    }

    #[test]
    fn off_faces_are_outward() {
        let cloud = generate_gaussian(15, 3, 2).unwrap();
        let r = region(&cloud, 1.0 / 15.0);
        let interior = r.interior_point.clone().unwrap();
        for f in &r.facets {
            let outward: Vec<f64> = r.halfspaces[f.halfspace].normal.iter().map(|v| -v).collect();
            let order = cyclic_order(&r.vertices, &f.vertices, &outward);
            let (a, b, c) = (&r.vertices[order[0]], &r.vertices[order[1]], &r.vertices[order[2]]);
            let u: Vec<f64> = (0..3).map(|k| b[k] - a[k]).collect();
            let w: Vec<f64> = (0..3).map(|k| c[k] - a[k]).collect();
            let cross = [
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            ];
            let away: f64 = (0..3).map(|k| cross[k] * (a[k] - interior[k])).sum();
            assert!(away > 0.0);
        }
    }

    #[test]
    fn formats_parse() {
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
