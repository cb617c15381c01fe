//! CSV and JSON writers for samples, Gram matrices and reports.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::mra1d::SampledFunction1D;
use crate::shearlet2d::SampledFunction2D;

/// Rows `x,value`.
pub fn write_samples_1d<W: Write>(f: &SampledFunction1D, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "value"])?;
    for (n, v) in f.values().iter().enumerate() {
        w.write_record([f.grid_point(n).to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows `x1,x2,value`, `x2` outer.
pub fn write_samples_2d<W: Write>(f: &SampledFunction2D, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x1", "x2", "value"])?;
    for i2 in 0..f.nx2 {
        for i1 in 0..f.nx1 {
            w.write_record([
                f.x1(i1).to_string(),
                f.x2(i2).to_string(),
                f.at(i1, i2).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Header row of labels, then one row per label.
pub fn write_gram<W: Write>(labels: &[String], g: &DMatrix<f64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for (i, label) in labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend((0..g.ncols()).map(|j| format!("{:e}", g[(i, j)])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_gram`].
pub fn read_gram(path: &Path) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_owned).collect();
    let n = labels.len();
    let mut data = Vec::with_capacity(n * n);
    for rec in r.records() {
        let rec = rec?;
        for field in rec.iter().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| crate::Error::Parse(field.to_owned()))?;
            data.push(v);
        }
    }
    if data.len() != n * n {
        return Err(crate::Error::InvalidArgument(format!(
            "expected {} entries, found {}",
            n * n,
            data.len()
        )));
    }
    Ok((labels, DMatrix::from_row_slice(n, n, &data)))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}
