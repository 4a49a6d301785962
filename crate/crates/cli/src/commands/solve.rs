use merbit_core::solvers::{
    bicgstab, build_transition, pagerank, seed_test_vector, BicgstabConfig, KernelKind, PageRankConfig, RunReport,
    SolverStatus,
};
use merbit_core::sparse::spmv_csr_reference;
use merbit_core::{CsrMatrix, Scalar, SimtConfig};

use super::{load, with_precision};
use crate::error::{CliError, CliResult};
use crate::io::{dataset_id, read_vector, sink, write_records, write_vector};
use crate::record::{SolverRecord, SCHEMA_VERSION};
use crate::{BicgstabArgs, PagerankArgs, SolverOpts};

fn nanos(d: std::time::Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

fn record<T: Scalar>(
    solver: &str,
    dataset: String,
    kind: KernelKind,
    c: &SimtConfig,
    a: &CsrMatrix<T>,
    report: &RunReport,
) -> SolverRecord {
    SolverRecord {
        schema_version: SCHEMA_VERSION,
        solver: solver.into(),
        dataset,
        kernel: kind.id().into(),
        precision: T::PRECISION.name().into(),
        omega: c.omega(),
        sigma: c.sigma(),
        block_size: c.block_size(),
        n_rows: a.n_rows() as u64,
        nnz: a.nnz() as u64,
        status: report.status.tag().into(),
        iterations: report.iterations as u64,
        metric: report.metric,
        t_p_ns: nanos(report.t_p),
        t_r_ns: nanos(report.t_r),
        t_ns: nanos(report.total()),
    }
}

fn emit<T: Scalar>(opts: &SolverOpts, rec: &SolverRecord, status: &SolverStatus, v: &[T]) -> CliResult<()> {
    write_records(&mut *sink(opts.output.out.as_deref())?, std::slice::from_ref(rec), opts.output.format)?;
    if let Some(p) = &opts.vector_out {
        write_vector(p, v)?;
    }
    match status {
        SolverStatus::Breakdown(why) => Err(CliError::Breakdown(why.clone())),
        _ => Ok(()),
    }
}

fn pagerank_typed<T: Scalar>(args: &PagerankArgs) -> CliResult<()> {
    let opts = &args.solver;
    let kind: KernelKind = opts.kernel.parse()?;
    let c = opts.opts.config()?;
    let p = build_transition(&load::<T>(&args.graph)?)?;
    let defaults = PageRankConfig::default();
    let cfg = PageRankConfig {
        damping: args.damping,
        max_iters: opts.max_iters.unwrap_or(defaults.max_iters),
        err_tol: args.err_tol,
        reference_iters: args.reference_iters,
    };
    let mut backend = kind.build(&p, &c)?;
    let res = pagerank(&p, &cfg, backend.as_mut())?;
    let rec = record("pagerank", dataset_id(opts.dataset.as_deref(), &args.graph), kind, &c, &p, &res.report);
    emit(opts, &rec, &res.report.status, &res.pi)
}

pub fn run_pagerank(args: &PagerankArgs) -> CliResult<()> {
    with_precision!(args.solver.opts.precision(), pagerank_typed(args))
}

fn bicgstab_typed<T: Scalar>(args: &BicgstabArgs) -> CliResult<()> {
    let opts = &args.solver;
    let kind: KernelKind = opts.kernel.parse()?;
    let c = opts.opts.config()?;
    let mut a = load::<T>(&args.matrix)?;
    if args.unit_values {
        a = a.map_values(|_| T::one());
    }
    let b = match &args.rhs {
        Some(p) => read_vector::<T>(p)?,
        None => spmv_csr_reference(&a, &seed_test_vector::<T>(a.n_cols(), -1.0, 1.0, args.seed))?,
    };
    let cfg = BicgstabConfig {
        tol: args.tol,
        max_iters: opts.max_iters.unwrap_or(BicgstabConfig::default().max_iters),
    };
    let mut backend = kind.build(&a, &c)?;
    let res = bicgstab(backend.as_mut(), &b, &cfg)?;
    let rec = record("bicgstab", dataset_id(opts.dataset.as_deref(), &args.matrix), kind, &c, &a, &res.report);
    emit(opts, &rec, &res.report.status, &res.x)
}

pub fn run_bicgstab(args: &BicgstabArgs) -> CliResult<()> {
    with_precision!(args.solver.opts.precision(), bicgstab_typed(args))
}
