//! Flat CSV form of exact matrices: one `row,col,re,im` record per entry in
//! row-major order, rationals written as `p/q`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::{Matrix, GR};
use crate::error::{Error, Result};
use crate::orthogonality::GramTable;

const HEADER: [&str; 4] = ["row", "col", "re", "im"];

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Writes records for `m`, each prefixed with `prefix` (e.g. block indices).
pub fn write_matrix_records<W: std::io::Write>(
    out: &mut csv::Writer<W>,
    prefix: &[String],
    m: &Matrix,
) -> Result<()> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let z = &m[(r, c)];
            let mut rec = prefix.to_vec();
            rec.extend([r.to_string(), c.to_string(), z.re().to_string(), z.im().to_string()]);
            out.write_record(&rec).map_err(csv_err)?;
        }
    }
    Ok(())
}

pub fn matrix_to_csv(m: &Matrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    write_matrix_records(&mut w, &[], m)?;
    finish(w)
}

pub fn matrix_from_csv(text: &str) -> Result<Matrix> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse(format!("expected header row,col,re,im, got {headers:?}")));
    }
    let mut cells = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let idx = |i: usize| rec[i].parse::<usize>().map_err(|e| Error::Parse(e.to_string()));
        let num = |i: usize| rec[i].parse::<BigRational>().map_err(|e| Error::Parse(e.to_string()));
        cells.push((idx(0)?, idx(1)?, GR::new(num(2)?, num(3)?)));
    }
    let rows = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let cols = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    if cells.len() != rows * cols {
        return Err(Error::Parse(format!("{} entries for a {rows}x{cols} matrix", cells.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (r, c, z) in cells {
        m[(r, c)] = z;
    }
    Ok(m)
}

/// Every block of a Gram table, with `w,w2` prefixed to each record.
pub fn gram_to_csv(g: &GramTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["w", "w2", "row", "col", "re", "im"]).map_err(csv_err)?;
    for e in &g.entries {
        write_matrix_records(&mut w, &[e.w.to_string(), e.w2.to_string()], &e.matrix)?;
    }
    finish(w)
}

/// Numeric matrix samples as `u,row,col,re,im`.
pub fn samples_to_csv(samples: &[(f64, DMatrix<Complex64>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "row", "col", "re", "im"]).map_err(csv_err)?;
    for (u, m) in samples {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                let rec = [u.to_string(), r.to_string(), c.to_string(), z.re.to_string(), z.im.to_string()];
                w.write_record(&rec).map_err(csv_err)?;
            }
        }
    }
    finish(w)
}

/// `[[[re, im], ...], ...]`, row by row.
pub fn complex_matrix_json(m: &DMatrix<Complex64>) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
    serde_json::json!(rows)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
