//! Coordinate text format for partial and dense matrices.
//!
//! ```text
//! # comment
//! pmatrix 3
//! 1 1 0.75
//! 1 2 0.5
//! ...
//! ```
//!
//! `pmatrix <n>` files list specified entries with 1-based indices; absent
//! positions are unspecified. `matrix <rows> <cols>` files hold rectangular
//! results and list every entry. Values are written with 17 significant
//! digits, so reading back reproduces them exactly.

use std::collections::BTreeMap;

use crate::completion::PartialMatrix;
use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

enum Header {
    Partial(usize),
    Dense(usize, usize),
}

/// `(line, i, j, value)` with 0-based indices.
type Record = (usize, usize, usize, f64);

/// Header and records, checked against the header's shape and for duplicates.
fn read_records(text: &str) -> Result<(Header, Vec<Record>)> {
    let mut header = None;
    let mut records = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(h) = &header else {
            let dim = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| parse_err(line_no, format!("bad dimension '{s}'")))
            };
            header = Some(match fields.as_slice() {
                ["pmatrix", n] => Header::Partial(dim(n)?),
                ["matrix", r, c] => Header::Dense(dim(r)?, dim(c)?),
                _ => {
                    return Err(parse_err(
                        line_no,
                        "expected header 'pmatrix <n>' or 'matrix <rows> <cols>'",
                    ))
                }
            });
            continue;
        };
        let (rows, cols) = match *h {
            Header::Partial(n) => (n, n),
            Header::Dense(r, c) => (r, c),
        };
        let [i, j, v] = fields.as_slice() else {
            return Err(parse_err(line_no, "expected 'i j value'"));
        };
        let index = |s: &str, limit: usize| {
            s.parse::<usize>()
                .ok()
                .filter(|&k| (1..=limit).contains(&k))
                .map(|k| k - 1)
                .ok_or_else(|| parse_err(line_no, format!("index '{s}' outside 1..={limit}")))
        };
        let (i, j) = (index(i, rows)?, index(j, cols)?);
        let v: f64 = v
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| parse_err(line_no, format!("bad value '{v}'")))?;
        if let Some(first) = seen.insert((i, j), line_no) {
            return Err(parse_err(
                line_no,
                format!("entry ({}, {}) already given on line {first}", i + 1, j + 1),
            ));
        }
        records.push((line_no, i, j, v));
    }
    let header = header.ok_or_else(|| parse_err(0, "missing header"))?;
    Ok((header, records))
}

/// Reads a `pmatrix` file. Every diagonal entry must be present and the
/// pattern must be symmetric.
pub fn read_partial(text: &str) -> Result<PartialMatrix> {
    let (header, records) = read_records(text)?;
    let Header::Partial(n) = header else {
        return Err(parse_err(0, "expected a 'pmatrix' file"));
    };
    let present: BTreeMap<(usize, usize), usize> = records.iter().map(|&(l, i, j, _)| ((i, j), l)).collect();
    for i in 0..n {
        if !present.contains_key(&(i, i)) {
            return Err(parse_err(0, format!("diagonal entry ({0}, {0}) missing", i + 1)));
        }
    }
    for (&(i, j), &line) in &present {
        if !present.contains_key(&(j, i)) {
            return Err(parse_err(
                line,
                format!("entry ({}, {}) has no partner ({}, {})", i + 1, j + 1, j + 1, i + 1),
            ));
        }
    }
    PartialMatrix::from_entries(n, records.into_iter().map(|(_, i, j, v)| (i, j, v)))
}

/// Reads a fully populated matrix: a `matrix` file (absent entries are zero)
/// or a `pmatrix` file that lists every position.
pub fn read_dense(text: &str) -> Result<DenseMatrix> {
    let (header, records) = read_records(text)?;
    let (rows, cols) = match header {
        Header::Partial(n) => {
            if records.len() != n * n {
                return Err(parse_err(
                    0,
                    format!("expected all {} entries, found {}", n * n, records.len()),
                ));
            }
            (n, n)
        }
        Header::Dense(r, c) => (r, c),
    };
    let mut m = DenseMatrix::zeros(rows, cols);
    for (_, i, j, v) in records {
        m[(i, j)] = v;
    }
    Ok(m)
}

pub fn write_partial(m0: &PartialMatrix) -> String {
    let mut out = format!("pmatrix {}\n", m0.n());
    for (i, j, v) in m0.entries() {
        out.push_str(&format!("{} {} {}\n", i + 1, j + 1, fmt_value(v)));
    }
    out
}

/// A square matrix as a `pmatrix` file listing every entry.
pub fn write_square(m: &DenseMatrix) -> String {
    assert!(m.is_square(), "write_square needs a square matrix");
    let mut out = format!("pmatrix {}\n", m.rows());
    push_entries(&mut out, m);
    out
}

/// Any matrix as a `matrix` file listing every entry.
pub fn write_dense(m: &DenseMatrix) -> String {
    let mut out = format!("matrix {} {}\n", m.rows(), m.cols());
    push_entries(&mut out, m);
    out
}

fn push_entries(out: &mut String, m: &DenseMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push_str(&format!("{} {} {}\n", i + 1, j + 1, fmt_value(m[(i, j)])));
        }
    }
}
