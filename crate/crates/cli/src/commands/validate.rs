use std::fs::File;
use std::io::{BufReader, Write};

use merbit_core::baseline::spmv_merge_runtime;
use merbit_core::format::{generate_tile, pack_descriptor, read_tile_cache, reconstruct_path};
use merbit_core::kernel::spmv_merbit;
use merbit_core::merge_path::sequential_path;
use merbit_core::solvers::seed_test_vector;
use merbit_core::sparse::spmv_csr_reference;
use merbit_core::{CsrMatrix, DualBuffer, Error, Scalar, SimtConfig, TileMetadata};

use super::{load, with_precision};
use crate::error::{CliError, CliResult};
use crate::io::{read_vector, sink, write_vector};
use crate::ValidateArgs;

/// Configurations checked when no omega or sigma is given.
pub const STANDARD_CONFIGS: [(u32, u32); 3] = [(32, 14), (32, 7), (4, 4)];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub config: String,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(c: &SimtConfig, check: &'static str, failure: Option<String>) -> Self {
        Self {
            config: c.to_string(),
            check,
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        }
    }
}

fn within_bound<T: Scalar>(a: &CsrMatrix<T>, x: &[T], got: &[T], want: &[T]) -> Option<String> {
    let eps = T::epsilon().as_f64();
    let max_v = a.max_abs_value().as_f64();
    let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    for (r, (g, w)) in got.iter().zip(want).enumerate() {
        let bound = 4.0 * eps * a.row_nnz(r) as f64 * max_v * max_x;
        let diff = (g.as_f64() - w.as_f64()).abs();
        if diff.is_nan() || diff > bound {
            return Some(format!("row {r}: {g} vs reference {w} (|diff| {diff:e} > {bound:e})"));
        }
    }
    None
}

fn check_tile<T: Scalar>(
    a: &CsrMatrix<T>,
    x: &[T],
    t: &TileMetadata,
    c: &SimtConfig,
    want: &[T],
    out: &mut Vec<CheckOutcome>,
) -> CliResult<()> {
    let path = reconstruct_path(t, c, a.nnz(), a.n_rows())?;
    let failure = (path != sequential_path(a.row_offsets())).then(|| "decoded path differs from the sequential walk".into());
    out.push(CheckOutcome::new(c, "path", failure));

    let mut failure = None;
    for lane in 0..t.lane_num() {
        let d = t.lane_desc()[lane];
        if pack_descriptor(t.lane_fields(lane), c).ok() != Some(d) {
            failure = Some(format!("lane {lane}: descriptor {} does not round-trip", d.word()));
            break;
        }
    }
    out.push(CheckOutcome::new(c, "descriptor", failure));

    let mut d = DualBuffer::new(a.n_rows());
    spmv_merbit(t, a, x, &mut d, c)?;
    out.push(CheckOutcome::new(c, "merbit", within_bound(a, x, d.output(), want)));
    Ok(())
}

/// Runs every check for each configuration; a supplied tile cache is checked
/// against its own configuration instead of a freshly generated one.
pub fn validate_matrix<T: Scalar>(
    a: &CsrMatrix<T>,
    x: &[T],
    configs: &[SimtConfig],
    cached: Option<&TileMetadata>,
) -> CliResult<Vec<CheckOutcome>> {
    if x.len() != a.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: a.n_cols(),
            got: x.len(),
        }
        .into());
    }
    let want = spmv_csr_reference(a, x)?;
    let mut out = Vec::new();
    for c in configs {
        match cached {
            Some(t) => check_tile(a, x, t, c, &want, &mut out)?,
            None => check_tile(a, x, &generate_tile(a, c)?, c, &want, &mut out)?,
        }
        let merge = spmv_merge_runtime(a, x, c)?;
        out.push(CheckOutcome::new(c, "merge", within_bound(a, x, &merge, &want)));
    }
    Ok(out)
}

fn run_typed<T: Scalar>(args: &ValidateArgs) -> CliResult<()> {
    let a = load::<T>(&args.matrix)?;
    let x = match &args.x {
        Some(p) => read_vector::<T>(p)?,
        None => seed_test_vector(a.n_cols(), -1.0, 1.0, args.seed),
    };
    let k = &args.kernel;
    let cached = match &args.tile {
        Some(p) => {
            let (t, precision) = read_tile_cache(BufReader::new(File::open(p).map_err(Error::Io)?))?;
            if precision != k.precision() {
                return Err(Error::ConfigMismatch(format!(
                    "tile cache was built for {precision}, validating in {}",
                    k.precision()
                ))
                .into());
            }
            Some(t)
        }
        None => None,
    };
    let configs = match (&cached, k.omega, k.sigma) {
        (Some(t), _, _) => {
            let block = k.block_size.unwrap_or(t.omega() * merbit_core::format::DEFAULT_BLOCK_WARPS);
            vec![SimtConfig::new(t.omega(), t.sigma(), block)?]
        }
        (None, None, None) => STANDARD_CONFIGS
            .iter()
            .map(|&(w, s)| match k.block_size {
                Some(b) => SimtConfig::new(w, s, b),
                None => SimtConfig::with_default_block(w, s),
            })
            .collect::<Result<_, _>>()?,
        _ => vec![k.config()?],
    };

    let outcomes = validate_matrix(&a, &x, &configs, cached.as_ref())?;
    if let Some(p) = &args.y_out {
        let c = &configs[0];
        let t = match cached {
            Some(t) => t,
            None => generate_tile(&a, c)?,
        };
        let mut d = DualBuffer::new(a.n_rows());
        spmv_merbit(&t, &a, &x, &mut d, c)?;
        write_vector(p, d.output())?;
    }
    let mut w = sink(args.out.as_deref())?;
    let mut failed = 0;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        writeln!(w, "{verdict} [{}] {} {}", o.config, o.check, o.detail)?;
        failed += usize::from(!o.passed);
    }
    w.flush()?;
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks failed", outcomes.len())));
    }
    Ok(())
}

pub fn run(args: &ValidateArgs) -> CliResult<()> {
    with_precision!(args.kernel.precision(), run_typed(args))
}
