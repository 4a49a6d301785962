use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use merbit_core::{Error, Scalar};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliResult;
use crate::Format;

/// Reads a dense vector: one value per line, blank lines and `%` or `#`
/// comments skipped.
pub fn read_vector<T: Scalar>(path: &Path) -> CliResult<Vec<T>> {
    let reader = BufReader::new(File::open(path).map_err(Error::Io)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(Error::Io)?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('%') || s.starts_with('#') {
            continue;
        }
        let v: f64 = s.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("'{s}' is not a number"),
        })?;
        out.push(T::from_f64(v));
    }
    Ok(out)
}

pub fn write_vector<T: Scalar>(path: &Path, v: &[T]) -> CliResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for x in v {
        writeln!(w, "{:e}", x.as_f64())?;
    }
    w.flush()?;
    Ok(())
}

pub fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_records<R: Serialize>(w: &mut dyn Write, records: &[R], format: Format) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(&mut *w);
            for r in records {
                wtr.serialize(r)?;
            }
            wtr.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, records)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: DeserializeOwned>(r: impl io::Read, format: Format) -> CliResult<Vec<R>> {
    Ok(match format {
        Format::Csv => csv::Reader::from_reader(r).deserialize().collect::<Result<_, _>>()?,
        Format::Json => serde_json::from_reader(r)?,
    })
}

pub fn dataset_id(explicit: Option<&str>, path: &Path) -> String {
    explicit
        .map(str::to_owned)
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "matrix".into())
}
