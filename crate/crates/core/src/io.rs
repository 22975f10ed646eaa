//! CSV files for point clouds and lifted clouds.
//!
//! A point cloud file has the header `x0,...,x{n-1}` and one point per row.
//! A lifted cloud file appends the matrix entries in row-major order under
//! `m00,...,m{n-1}{n-1}`. Numbers are written in scientific notation with 17
//! significant digits, so reading a file back gives bit-identical values.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{LiftedCloud, PointCloud};

fn point_header(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn matrix_header(n: usize) -> Vec<String> {
    (0..n).flat_map(|i| (0..n).map(move |j| format!("m{i}{j}"))).collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::Parse {
            line: pos.line() as usize,
            column: 1,
            message: e.to_string(),
        },
        None => Error::Io(e.to_string()),
    }
}

fn write_rows<W: Write>(out: W, header: &[String], width: usize, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    let mut row = Vec::with_capacity(width);
    for chunk in values.chunks_exact(width.max(1)) {
        row.clear();
        row.extend(chunk.iter().map(|v| format!("{v:.16e}")));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric table; returns the header and the values row by row.
fn read_rows<R: Read>(input: R) -> Result<(Vec<String>, Vec<f64>)> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    let mut values = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                column: k + 1,
                message: format!("'{field}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: k + 1,
                    message: format!("'{field}' is not finite"),
                });
            }
            values.push(v);
        }
    }
    Ok((header, values))
}

fn expect_header(found: &[String], expected: &[String]) -> Result<()> {
    if found != expected {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected header {}, found {}", expected.join(","), found.join(",")),
        });
    }
    Ok(())
}

pub fn write_point_cloud<W: Write>(out: W, cloud: &PointCloud) -> Result<()> {
    write_rows(out, &point_header(cloud.dim()), cloud.dim(), cloud.coords())
}

pub fn read_point_cloud<R: Read>(input: R) -> Result<PointCloud> {
    let (header, values) = read_rows(input)?;
    if header.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing header".into(),
        });
    }
    expect_header(&header, &point_header(header.len()))?;
    PointCloud::new(header.len(), values)
}

pub fn write_lifted_cloud<W: Write>(out: W, cloud: &LiftedCloud) -> Result<()> {
    let n = cloud.ambient_dim();
    let mut header = point_header(n);
    header.extend(matrix_header(n));
    let mut values = Vec::with_capacity(cloud.len() * (n + n * n));
    for i in 0..cloud.len() {
        values.extend_from_slice(cloud.base_point(i));
        values.extend_from_slice(cloud.matrix(i));
    }
    write_rows(out, &header, n + n * n, &values)
}

pub fn read_lifted_cloud<R: Read>(input: R) -> Result<LiftedCloud> {
    let (header, values) = read_rows(input)?;
    let width = header.len();
    let n = (1..=width).find(|n| n + n * n == width).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("{width} columns do not form n + n^2"),
    })?;
    let mut expected = point_header(n);
    expected.extend(matrix_header(n));
    expect_header(&header, &expected)?;
    let mut base = Vec::new();
    let mut matrices = Vec::new();
    for row in values.chunks_exact(width) {
        base.extend_from_slice(&row[..n]);
        matrices.extend_from_slice(&row[n..]);
    }
    LiftedCloud::new(PointCloud::new(n, base)?, matrices, None)
}

pub fn save_point_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    write_point_cloud(File::create(path)?, cloud)
}

pub fn load_point_cloud(path: &Path) -> Result<PointCloud> {
    read_point_cloud(File::open(path)?)
}

pub fn save_lifted_cloud(path: &Path, cloud: &LiftedCloud) -> Result<()> {
    write_lifted_cloud(File::create(path)?, cloud)
}

pub fn load_lifted_cloud(path: &Path) -> Result<LiftedCloud> {
    read_lifted_cloud(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_cloud_round_trip_is_exact() {
        let c = PointCloud::from_rows(2, &[[0.1, 1.0 / 3.0], [-2.5e-17, 1e300]]).unwrap();
        let mut buf = Vec::new();
        write_point_cloud(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x0,x1\n"));
        assert_eq!(read_point_cloud(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn lifted_round_trip() {
        let base = PointCloud::from_rows(2, &[[0.0, 1.0]]).unwrap();
        let lc = LiftedCloud::new(base, vec![0.25, 0.1, 0.1, 0.05], None).unwrap();
        let mut buf = Vec::new();
        write_lifted_cloud(&mut buf, &lc).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("x0,x1,m00,m01,m10,m11\n"));
        let back = read_lifted_cloud(buf.as_slice()).unwrap();
        assert_eq!(back.matrices(), lc.matrices());
        assert_eq!(back.base_points(), lc.base_points());
    }

    #[test]
    fn parse_errors_report_position() {
        match read_point_cloud("x0,x1\n1,2\n3,abc\n".as_bytes()) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_point_cloud("x0,x1\n1,2\n3\n".as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(read_point_cloud("a,b\n1,2\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_lifted_cloud("x0,x1,m00\n".as_bytes()), Err(Error::Parse { .. })));
    }
}
