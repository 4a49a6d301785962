use std::time::Instant;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

use super::backend::{ReferenceBackend, SpmvBackend};
use super::{RunReport, SolverStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub max_iters: usize,
    pub err_tol: f64,
    /// Power iterations used for the comparison solution.
    pub reference_iters: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            max_iters: 1000,
            err_tol: 1e-10,
            reference_iters: 210,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PageRankResult<T> {
    pub pi: Vec<T>,
    pub report: RunReport,
    /// ERR after each iteration.
    pub err_history: Vec<f64>,
    /// `sum(pi)` after each iteration.
    pub mass_history: Vec<f64>,
}

/// Column-stochastic transition matrix of a directed graph whose adjacency
/// has `A[j][i] != 0` for an edge `j -> i`: `P[i][j] = 1 / outdeg(j)`.
/// Nodes without out-edges give empty columns.
pub fn build_transition<T: Scalar>(graph: &CsrMatrix<T>) -> Result<CsrMatrix<T>> {
    if !graph.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "transition matrix needs a square adjacency, got {}x{}",
            graph.n_rows(),
            graph.n_cols()
        )));
    }
    let offsets = graph.row_offsets();
    let values = (0..graph.n_rows())
        .flat_map(|r| {
            let deg = offsets[r + 1] - offsets[r];
            std::iter::repeat_n(T::one() / T::from_f64(deg as f64), deg)
        })
        .collect();
    let scaled = CsrMatrix::from_parts(
        graph.n_rows(),
        graph.n_cols(),
        offsets.to_vec(),
        graph.col_indices().to_vec(),
        values,
    )?;
    Ok(scaled.transpose())
}

struct Power<T> {
    n: usize,
    dangling: Vec<usize>,
    damping: T,
    teleport: T,
    pi: Vec<T>,
}

impl<T: Scalar> Power<T> {
    fn new(p: &CsrMatrix<T>, damping: f64) -> Result<Self> {
        let n = p.n_rows();
        if n == 0 {
            return Err(Error::InvalidMatrix("PageRank on an empty graph".into()));
        }
        let mut has_entry = vec![false; n];
        for &c in p.col_indices() {
            has_entry[c] = true;
        }
        Ok(Self {
            n,
            dangling: (0..n).filter(|&j| !has_entry[j]).collect(),
            damping: T::from_f64(damping),
            teleport: T::from_f64(1.0 - damping),
            pi: vec![T::one() / T::from_f64(n as f64); n],
        })
    }

    /// `pi <- c P pi + (c * dangling mass + (1 - c)) / n`; returns `sum(pi)`.
    fn step(&mut self, backend: &mut dyn SpmvBackend<T>) -> Result<f64> {
        let dangling_mass: T = self.dangling.iter().map(|&j| self.pi[j]).sum();
        let shift = (self.damping * dangling_mass + self.teleport) / T::from_f64(self.n as f64);
        let y = backend.spmv(&self.pi)?;
        let mut mass = 0.0;
        for (p, &v) in self.pi.iter_mut().zip(y) {
            *p = self.damping * v + shift;
            mass += p.as_f64();
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Breakdown(format!("PageRank iterate has norm {mass}")));
        }
        Ok(mass)
    }
}

/// `max_i |pi_i - ref_i| / ref_i`.
fn relative_err<T: Scalar>(pi: &[T], reference: &[T]) -> f64 {
    pi.iter()
        .zip(reference)
        .map(|(p, r)| ((p.as_f64() - r.as_f64()) / r.as_f64()).abs())
        .fold(0.0, f64::max)
}

/// Power iteration on `p` with the given backend. The comparison solution
/// comes from `reference_iters` iterations of the sequential CSR kernel and
/// is not timed.
pub fn pagerank<T: Scalar>(
    p: &CsrMatrix<T>,
    cfg: &PageRankConfig,
    backend: &mut dyn SpmvBackend<T>,
) -> Result<PageRankResult<T>> {
    if !(cfg.damping > 0.0 && cfg.damping < 1.0) {
        return Err(Error::InvalidArgument(format!("damping must lie in (0,1), got {}", cfg.damping)));
    }
    if !p.is_square() {
        return Err(Error::InvalidMatrix("transition matrix must be square".into()));
    }
    if backend.n_rows() != p.n_rows() || backend.n_cols() != p.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: p.n_rows(),
            got: backend.n_rows(),
        });
    }

    let mut reference = Power::new(p, cfg.damping)?;
    let mut ref_backend = ReferenceBackend::new(p);
    for _ in 0..cfg.reference_iters {
        reference.step(&mut ref_backend)?;
    }
    let pi_star = reference.pi;

    let start = Instant::now();
    let mut power = Power::new(p, cfg.damping)?;
    let mut err_history = Vec::new();
    let mut mass_history = Vec::new();
    let mut status = SolverStatus::MaxIterations;
    for _ in 0..cfg.max_iters {
        mass_history.push(power.step(backend)?);
        let err = relative_err(&power.pi, &pi_star);
        err_history.push(err);
        if err < cfg.err_tol {
            status = SolverStatus::Converged;
            break;
        }
    }
    let t_r = start.elapsed();
    let metric = err_history.last().copied().unwrap_or_else(|| relative_err(&power.pi, &pi_star));
    Ok(PageRankResult {
        pi: power.pi,
        report: RunReport {
            t_p: backend.preprocessing(),
            t_r,
            iterations: err_history.len(),
            metric,
            status,
        },
        err_history,
        mass_history,
    })
}
