use std::time::Duration;

use merbit_core::baseline::{speedup, throughput};
use merbit_core::format::{long_row_fraction, metadata_footprint, SimtConfig};
use merbit_core::solvers::{seed_test_vector, CooBackend, KernelKind, MerbitBackend, SpmvBackend};
use merbit_core::sparse::{degree_stats, spmv_csr_reference, DegreeStats};
use merbit_core::{CsrMatrix, Error, Precision, Scalar};

use super::{load, time_spmv, with_precision};
use crate::error::{CliError, CliResult};
use crate::io::{dataset_id, sink, write_records};
use crate::record::{BenchRecord, SweepRecord, SCHEMA_VERSION};
use crate::{BenchArgs, SweepArgs, TimingOpts};

fn nanos(d: Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

fn degrees<T: Scalar>(a: &CsrMatrix<T>, p: Precision) -> (f64, String) {
    match degree_stats(a, p) {
        Ok(DegreeStats { avg_degree, group, .. }) => (avg_degree, group.label().into()),
        Err(_) => (0.0, String::new()),
    }
}

/// One record per kernel. The COO baseline is always timed so every row
/// carries a speedup.
pub fn bench_records<T: Scalar>(
    a: &CsrMatrix<T>,
    dataset: &str,
    kernels: &[KernelKind],
    c: &SimtConfig,
    timing: &TimingOpts,
) -> CliResult<Vec<BenchRecord>> {
    let p = T::PRECISION;
    let x: Vec<T> = seed_test_vector(a.n_cols(), -1.0, 1.0, timing.seed);
    let baseline = time_spmv(&mut CooBackend::new(a), &x, timing.warmup, timing.iters)?;
    let (avg_degree, degree_group) = degrees(a, p);
    let mut out = Vec::with_capacity(kernels.len());
    for &kind in kernels {
        let (mean, t_p, tile) = match kind {
            KernelKind::Coo => (baseline, Duration::ZERO, None),
            KernelKind::Merbit => {
                let mut backend = MerbitBackend::new(a, c)?;
                let mean = time_spmv(&mut backend, &x, timing.warmup, timing.iters)?;
                (mean, backend.preprocessing(), Some(long_row_fraction(backend.tile())))
            }
            _ => {
                let mut backend = kind.build(a, c)?;
                let mean = time_spmv(backend.as_mut(), &x, timing.warmup, timing.iters)?;
                (mean, backend.preprocessing(), None)
            }
        };
        let (r_f, mem_sigma, t_p_over_t) = match tile {
            Some(r_f) => (
                Some(r_f),
                Some(metadata_footprint(a.nnz(), a.n_rows(), c, r_f)?),
                Some(t_p.as_secs_f64() / mean.as_secs_f64()),
            ),
            None => (None, None, None),
        };
        out.push(BenchRecord {
            schema_version: SCHEMA_VERSION,
            dataset: dataset.into(),
            kernel: kind.id().into(),
            precision: p.name().into(),
            omega: c.omega(),
            sigma: c.sigma(),
            block_size: c.block_size(),
            n_rows: a.n_rows() as u64,
            nnz: a.nnz() as u64,
            iterations: timing.iters as u64,
            warmup: timing.warmup as u64,
            mean_ns: nanos(mean),
            baseline_mean_ns: nanos(baseline),
            ct: throughput(a.nnz(), Duration::from_nanos(nanos(mean)))?,
            speedup: speedup(
                Duration::from_nanos(nanos(baseline)),
                Duration::from_nanos(nanos(mean)),
            )?,
            t_p_ns: nanos(t_p),
            t_p_over_t,
            r_f,
            mem_sigma,
            avg_degree,
            degree_group: degree_group.clone(),
        });
    }
    Ok(out)
}

/// Parses `1-14`, `3,5,7` or a mix.
pub fn parse_sigmas(spec: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Core(Error::InvalidArgument(format!("cannot parse sigma list '{spec}'")));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi): (u32, u32) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// One row per configuration; every configuration must be feasible and is
/// checked against the reference kernel before it is timed.
pub fn sweep_records<T: Scalar>(
    a: &CsrMatrix<T>,
    dataset: &str,
    configs: &[SimtConfig],
    timing: &TimingOpts,
) -> CliResult<Vec<SweepRecord>> {
    let x: Vec<T> = seed_test_vector(a.n_cols(), -1.0, 1.0, timing.seed);
    let want = spmv_csr_reference(a, &x)?;
    let baseline = time_spmv(&mut CooBackend::new(a), &x, timing.warmup, timing.iters)?;
    let eps = T::epsilon().as_f64();
    let bound_scale = 4.0 * eps * a.max_abs_value().as_f64() * x.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let mut out = Vec::with_capacity(configs.len());
    for c in configs {
        let mut backend = MerbitBackend::new(a, c)?;
        let got = backend.spmv(&x)?.to_vec();
        let validated = got
            .iter()
            .zip(&want)
            .enumerate()
            .all(|(r, (g, w))| (g.as_f64() - w.as_f64()).abs() <= bound_scale * a.row_nnz(r) as f64);
        let mean = time_spmv(&mut backend, &x, timing.warmup, timing.iters)?;
        let r_f = long_row_fraction(backend.tile());
        out.push(SweepRecord {
            schema_version: SCHEMA_VERSION,
            dataset: dataset.into(),
            precision: T::PRECISION.name().into(),
            omega: c.omega(),
            sigma: c.sigma(),
            block_size: c.block_size(),
            mean_ns: nanos(mean),
            baseline_mean_ns: nanos(baseline),
            speedup: speedup(
                Duration::from_nanos(nanos(baseline)),
                Duration::from_nanos(nanos(mean)),
            )?,
            r_f,
            mem_sigma: metadata_footprint(a.nnz(), a.n_rows(), c, r_f)?,
            smem_sigma: c.smem_bytes(T::PRECISION) as u64,
            validated,
        });
    }
    Ok(out)
}

fn bench_typed<T: Scalar>(args: &BenchArgs) -> CliResult<()> {
    let kernels = args
        .kernels
        .iter()
        .map(|k| k.parse::<KernelKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let c = args.kernel.config()?;
    let a = load::<T>(&args.matrix)?;
    let dataset = dataset_id(args.dataset.as_deref(), &args.matrix);
    let records = bench_records(&a, &dataset, &kernels, &c, &args.timing)?;
    write_records(&mut *sink(args.output.out.as_deref())?, &records, args.output.format)
}

pub fn run_bench(args: &BenchArgs) -> CliResult<()> {
    with_precision!(args.kernel.precision(), bench_typed(args))
}

fn sweep_typed<T: Scalar>(args: &SweepArgs) -> CliResult<()> {
    let configs = parse_sigmas(&args.sigmas)?
        .into_iter()
        .map(|s| args.kernel.config_with_sigma(Some(s)))
        .collect::<CliResult<Vec<_>>>()?;
    let a = load::<T>(&args.matrix)?;
    let dataset = dataset_id(args.dataset.as_deref(), &args.matrix);
    let records = sweep_records(&a, &dataset, &configs, &args.timing)?;
    write_records(&mut *sink(args.output.out.as_deref())?, &records, args.output.format)?;
    let failed: Vec<_> = records.iter().filter(|r| !r.validated).map(|r| r.sigma).collect();
    if !failed.is_empty() {
        return Err(CliError::Validation(format!("output disagrees with the reference at sigma {failed:?}")));
    }
    Ok(())
}

pub fn run_sweep(args: &SweepArgs) -> CliResult<()> {
    with_precision!(args.kernel.precision(), sweep_typed(args))
}
