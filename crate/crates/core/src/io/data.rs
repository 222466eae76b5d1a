//! CSV input and tie removal.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CsvOptions {
    /// Skip the first row.
    pub has_header: bool,
}

/// Reads a rectangular numeric CSV; `p` is the column count.
pub fn load_csv(path: impl AsRef<Path>, options: CsvOptions) -> Result<PointCloud> {
    read_csv(std::fs::File::open(path)?, options)
}

pub fn read_csv<R: Read>(reader: R, options: CsvOptions) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut coords = Vec::new();
    let mut width = None;
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            row: e.position().map_or(i + 1, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                row,
                column: record.len().min(expected) + 1,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: j + 1,
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: j + 1,
                    message: format!("not finite: {cell:?}"),
                });
            }
            coords.push(v);
        }
    }
    let Some(p) = width else {
        return Err(Error::InvalidCloud("no data rows".into()));
    };
    PointCloud::from_flat(p, coords)
}

/// Writes one row per point with shortest round-trip formatting.
pub fn write_csv<W: Write>(cloud: &PointCloud, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for x in cloud.points() {
        w.write_record(x.iter().map(|v| v.to_string()))
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

/// Drops rows bitwise equal to an earlier row, keeping order. Returns the
/// reduced cloud and the number of rows removed.
pub fn dedup_ties(cloud: &PointCloud) -> Result<(PointCloud, usize)> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut coords = Vec::new();
    let mut removed = 0;
    for x in cloud.points() {
        if seen.insert(x.iter().map(|v| v.to_bits()).collect()) {
            coords.extend_from_slice(x);
        } else {
            removed += 1;
        }
    }
    Ok((PointCloud::from_flat(cloud.dim(), coords)?, removed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_file() {
        let c = read_csv("0,0\n1,0\n1,1\n0,1\n".as_bytes(), CsvOptions::default()).unwrap();
        assert_eq!((c.len(), c.dim()), (4, 2));
    }

    #[test]
    fn header_skipped() {
        let opts = CsvOptions { has_header: true };
        let c = read_csv("x,y\n0,0\n1,0\n1, 1\n0,1\n".as_bytes(), opts).unwrap();
        assert_eq!(c.point(2), &[1.0, 1.0]);
        let err = read_csv("x,y\n0,0\n1,0\n".as_bytes(), CsvOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, column: 1, .. }));
    }

    #[test]
    fn ragged_row_named() {
        let err = read_csv("0,0\n1,0\n1\n0,1\n".as_bytes(), CsvOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }), "{err:?}");
    }

    #[test]
    fn bad_cell_located() {
        let err = read_csv("0,0\n1,0\n1,abc\n0,1\n".as_bytes(), CsvOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, column: 2, .. }), "{err:?}");
    }

    #[test]
    fn duplicates_removed_in_order() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ];
        let (c, removed) = dedup_ties(&PointCloud::new(rows).unwrap()).unwrap();
        assert_eq!(removed, 2);
        assert_eq!(
            c.rows(),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]
        );
        let (same, none) = dedup_ties(&c).unwrap();
        assert_eq!((same, none), (c, 0));
    }

    #[test]
    fn csv_round_trip() {
        let cloud = crate::io::generate_gaussian(12, 3, 5).unwrap();
        let mut buf = Vec::new();
        write_csv(&cloud, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), CsvOptions::default()).unwrap();
        assert_eq!(back, cloud);
    }
}
