//! CSV input and output. Numbers are written with 17 significant digits so
//! that reading them back recovers the same `f64`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::corr::CorrelationMatrix;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::optimizer::TracePoint;

/// Formats `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Malformed {
        line,
        message: e.to_string(),
    }
}

/// Reads numeric records; returns the header (if the first row is not
/// numeric) and the rows.
type Header = Option<Vec<String>>;

fn read_numeric<R: Read>(reader: R) -> Result<(Header, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (k, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(k + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::Malformed {
                line,
                message: format!(
                    "expected {} fields, found {}",
                    width.unwrap_or(0),
                    record.len()
                ),
            });
        }
        let parsed: Vec<Option<f64>> = record.iter().map(|s| s.parse::<f64>().ok()).collect();
        if header.is_none() && rows.is_empty() && parsed.iter().any(Option::is_none) {
            header = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let mut row = Vec::with_capacity(parsed.len());
        for (j, (v, raw)) in parsed.into_iter().zip(record.iter()).enumerate() {
            match v {
                Some(v) if v.is_finite() => row.push(v),
                Some(_) => {
                    return Err(Error::Malformed {
                        line,
                        message: format!("non-finite value `{raw}` in column {}", j + 1),
                    })
                }
                None => {
                    return Err(Error::Malformed {
                        line,
                        message: format!("non-numeric value `{raw}` in column {}", j + 1),
                    })
                }
            }
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Parses a comma-separated data table. The first row is taken as a header
/// when any of its fields is not a number.
pub fn parse_data_csv<R: Read>(reader: R) -> Result<DataMatrix> {
    let (header, rows) = read_numeric(reader)?;
    let data = DataMatrix::from_rows(&rows)?;
    match header {
        Some(names) => data.with_column_names(names),
        None => Ok(data),
    }
}

pub fn read_data_csv(path: &Path) -> Result<DataMatrix> {
    parse_data_csv(File::open(path).map_err(|e| io_error(path, e))?)
}

/// Writes the data with a header row of column names.
pub fn write_data_csv<W: Write>(out: W, x: &DataMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(x.names_or_default()).map_err(csv_error)?;
    for i in 0..x.n() {
        w.write_record((0..x.p()).map(|j| fmt_f64(x.values()[(i, j)])))
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        message: e.to_string(),
    })
}

/// Square matrix with a header row of variable names.
pub fn write_corr_csv<W: Write>(out: W, c: &CorrelationMatrix, names: &[String]) -> Result<()> {
    if names.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: names.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(names).map_err(csv_error)?;
    for i in 0..c.dim() {
        w.write_record((0..c.dim()).map(|j| fmt_f64(c.get(i, j))))
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        message: e.to_string(),
    })
}

/// Reads a matrix written by [`write_corr_csv`]; a header row is optional.
pub fn parse_corr_csv<R: Read>(reader: R) -> Result<(CorrelationMatrix, Vec<String>)> {
    let (header, rows) = read_numeric(reader)?;
    let m = rows.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidDimension(format!(
            "matrix has {m} rows but {} columns",
            rows.first().map_or(0, Vec::len)
        )));
    }
    let names = header.unwrap_or_else(|| (1..=m).map(|k| format!("V{k}")).collect());
    let c = CorrelationMatrix::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))?;
    Ok((c, names))
}

pub fn read_corr_csv(path: &Path) -> Result<(CorrelationMatrix, Vec<String>)> {
    parse_corr_csv(File::open(path).map_err(|e| io_error(path, e))?)
}

/// Long format: one `row, column, value` line per matrix entry.
pub fn write_heatmap_csv<W: Write>(out: W, c: &CorrelationMatrix, names: &[String]) -> Result<()> {
    if names.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: names.len(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "column", "value"])
        .map_err(csv_error)?;
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            w.write_record([names[i].as_str(), names[j].as_str(), &fmt_f64(c.get(i, j))])
                .map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        message: e.to_string(),
    })
}

pub fn write_trace_csv<W: Write>(out: W, trace: &[TracePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "evaluations", "f_best"])
        .map_err(csv_error)?;
    for t in trace {
        w.write_record([
            t.iteration.to_string(),
            t.evaluations.to_string(),
            fmt_f64(t.f_best),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        message: e.to_string(),
    })
}

/// Writes `(label, values...)` rows under `header`; used for angle vectors
/// and small tables.
pub fn write_rows_csv<W: Write>(
    out: W,
    header: &[&str],
    rows: &[(String, Vec<f64>)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for (label, values) in rows {
        let mut record = vec![label.clone()];
        record.extend(values.iter().map(|v| fmt_f64(*v)));
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<writer>".into(),
        message: e.to_string(),
    })
}
