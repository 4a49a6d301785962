mod bench;
mod convert;
mod solve;
mod validate;

use std::hint::black_box;
use std::path::Path;
use std::time::{Duration, Instant};

use merbit_core::solvers::SpmvBackend;
use merbit_core::sparse::read_matrix_market;
use merbit_core::{CsrMatrix, Error, Scalar};

pub use bench::{bench_records, sweep_records};
pub use validate::{validate_matrix, CheckOutcome};

use crate::error::CliResult;
use crate::Command;

pub fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Validate(a) => validate::run(a),
        Command::Bench(a) => bench::run_bench(a),
        Command::SigmaSweep(a) => bench::run_sweep(a),
        Command::Pagerank(a) => solve::run_pagerank(a),
        Command::Bicgstab(a) => solve::run_bicgstab(a),
        Command::Convert(a) => convert::run(a),
    }
}

/// Calls `f::<f32>` or `f::<f64>` according to a precision.
macro_rules! with_precision {
    ($p:expr, $f:ident ( $($arg:expr),* $(,)? )) => {
        match $p {
            merbit_core::Precision::Single => $f::<f32>($($arg),*),
            merbit_core::Precision::Double => $f::<f64>($($arg),*),
        }
    };
}
pub(crate) use with_precision;

pub(crate) fn load<T: Scalar>(path: &Path) -> CliResult<CsrMatrix<T>> {
    Ok(read_matrix_market::<T>(path)?)
}

/// Mean wall time of one `spmv` call over `iters` timed calls after
/// `warmup` untimed ones; never below one nanosecond.
pub fn time_spmv<T: Scalar>(
    backend: &mut dyn SpmvBackend<T>,
    x: &[T],
    warmup: usize,
    iters: usize,
) -> CliResult<Duration> {
    if iters == 0 {
        return Err(Error::InvalidArgument("--iters must be at least 1".into()).into());
    }
    for _ in 0..warmup {
        black_box(backend.spmv(x)?);
    }
    let mut total = Duration::ZERO;
    for _ in 0..iters {
        let start = Instant::now();
        black_box(backend.spmv(black_box(x))?);
        total += start.elapsed();
    }
    let mean = total.as_nanos() / iters as u128;
    Ok(Duration::from_nanos(mean.max(1) as u64))
}
