//! Matrix Market (`coordinate` kind) reader and writer.
//!
//! Supported fields: `real`, `integer`, `pattern`. Supported symmetries:
//! `general`, `symmetric` (expanded on read). Indices are 1-based on disk.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{CooTriples, CsrMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(1, format!("malformed header `{line}`")));
    }
    if tokens[1] != "matrix" {
        return Err(Error::Unsupported(format!("object `{}`", tokens[1])));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::Unsupported(format!("format `{}`", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(Error::Unsupported(format!("field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(Error::Unsupported(format!("symmetry `{other}`"))),
    };
    Ok((field, symmetry))
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.ok_or_else(|| parse_err(line, "missing index"))?
        .parse::<usize>()
        .map_err(|e| parse_err(line, format!("bad index: {e}")))
}

/// Parses a Matrix Market stream into 0-based triples. Pattern entries get
/// the value 1; symmetric files have their off-diagonal entries mirrored.
pub fn parse_matrix_market<T: Scalar, R: Read>(reader: R) -> Result<CooTriples<T>> {
    let mut lines = BufReader::new(reader).lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(parse_err(1, "empty stream")),
    };
    let (field, symmetry) = parse_header(header.trim())?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    let mut read = 0usize;

    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let Some((n_rows, n_cols, nnz)) = size else {
            let r = parse_index(tok.next(), lineno)?;
            let c = parse_index(tok.next(), lineno)?;
            let z = parse_index(tok.next(), lineno)?;
            if tok.next().is_some() {
                return Err(parse_err(lineno, "size line has extra tokens"));
            }
            size = Some((r, c, z));
            entries.reserve(if symmetry == Symmetry::Symmetric { 2 * z } else { z });
            continue;
        };
        if read == nnz {
            return Err(parse_err(lineno, format!("more than the declared {nnz} entries")));
        }
        let i = parse_index(tok.next(), lineno)?;
        let j = parse_index(tok.next(), lineno)?;
        if i == 0 || j == 0 || i > n_rows || j > n_cols {
            return Err(Error::IndexOutOfBounds {
                row: i.wrapping_sub(1),
                col: j.wrapping_sub(1),
                n_rows,
                n_cols,
            });
        }
        let value = match field {
            Field::Pattern => T::one(),
            Field::Real | Field::Integer => {
                let raw = tok.next().ok_or_else(|| parse_err(lineno, "missing value"))?;
                let v: f64 = raw
                    .parse()
                    .map_err(|e| parse_err(lineno, format!("bad value `{raw}`: {e}")))?;
                T::from_f64(v)
            }
        };
        let (r, c) = (i - 1, j - 1);
        entries.push((r, c, value));
        if symmetry == Symmetry::Symmetric && r != c {
            entries.push((c, r, value));
        }
        read += 1;
    }

    let (n_rows, n_cols, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if read != nnz {
        return Err(parse_err(0, format!("declared {nnz} entries, found {read}")));
    }
    if symmetry == Symmetry::Symmetric && n_rows != n_cols {
        return Err(Error::InvalidMatrix("symmetric matrix must be square".into()));
    }
    CooTriples::new(n_rows, n_cols, entries)
}

/// Reads a Matrix Market file and converts it to CSR.
pub fn read_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<CsrMatrix<T>> {
    let file = std::fs::File::open(path)?;
    Ok(parse_matrix_market::<T, _>(file)?.into())
}

/// Writes a CSR matrix as a `real general` coordinate file.
pub fn write_matrix_market<T: Scalar, W: Write>(a: &CsrMatrix<T>, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
    for r in 0..a.n_rows() {
        let (cols, vals) = a.row(r);
        for (c, v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
        }
    }
    Ok(())
}
