use std::time::Instant;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::backend::SpmvBackend;
use super::{RunReport, SolverStatus};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicgstabConfig {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for BicgstabConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 20000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BicgstabResult<T> {
    pub x: Vec<T>,
    /// Recursive relative residual after each iteration.
    pub residuals: Vec<f64>,
    /// `report.metric` is the true relative residual `|A x - b| / |b|` of
    /// the returned `x`.
    pub report: RunReport,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&p, &q)| p * q).sum()
}

fn norm<T: Scalar>(a: &[T]) -> f64 {
    dot(a, a).as_f64().sqrt()
}

fn usable<T: Scalar>(v: T) -> bool {
    v != T::zero() && v.is_finite()
}

fn true_residual<T: Scalar>(
    backend: &mut dyn SpmvBackend<T>,
    x: &[T],
    b: &[T],
    out: &mut [T],
) -> Result<f64> {
    let ax = backend.spmv(x)?;
    for ((o, &bi), &a) in out.iter_mut().zip(b).zip(ax) {
        *o = bi - a;
    }
    Ok(norm(out))
}

/// Unpreconditioned BiCGSTAB from `x = 0`. Stops when the true relative
/// residual drops below `cfg.tol`; a recursive residual that passes while
/// the true one does not is replaced by the true one and iteration goes on.
/// Breakdowns are reported through the status, not as errors.
pub fn bicgstab<T: Scalar>(
    backend: &mut dyn SpmvBackend<T>,
    b: &[T],
    cfg: &BicgstabConfig,
) -> Result<BicgstabResult<T>> {
    let n = backend.n_rows();
    if backend.n_cols() != n {
        return Err(Error::InvalidMatrix(format!(
            "BiCGSTAB needs a square operator, got {n}x{}",
            backend.n_cols()
        )));
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }

    let start = Instant::now();
    let b_norm = norm(b);
    let mut x = vec![T::zero(); n];
    let mut residuals = Vec::new();
    let t_p = backend.preprocessing();
    let finish = |x: Vec<T>, residuals: Vec<f64>, iterations, metric, status| BicgstabResult {
        x,
        residuals,
        report: RunReport {
            t_p,
            t_r: start.elapsed(),
            iterations,
            metric,
            status,
        },
    };
    if b_norm == 0.0 {
        return Ok(finish(x, residuals, 0, 0.0, SolverStatus::Converged));
    }

    let mut r = b.to_vec();
    let r_hat = b.to_vec();
    let mut p = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut t = vec![T::zero(); n];
    let mut scratch = vec![T::zero(); n];
    let (mut rho_prev, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut metric = 1.0;

    for it in 1..=cfg.max_iters {
        let rho = dot(&r_hat, &r);
        if !usable(rho) {
            return Ok(finish(x, residuals, it, metric, SolverStatus::Breakdown("rho = 0".into())));
        }
        let beta = (rho / rho_prev) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        v.copy_from_slice(backend.spmv(&p)?);
        let rv = dot(&r_hat, &v);
        if !usable(rv) {
            return Ok(finish(x, residuals, it, metric, SolverStatus::Breakdown("(r_hat, v) = 0".into())));
        }
        alpha = rho / rv;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }

        if norm(&s) / b_norm < cfg.tol {
            let half: Vec<T> = x.iter().zip(&p).map(|(&xi, &pi)| xi + alpha * pi).collect();
            let res = true_residual(backend, &half, b, &mut scratch)? / b_norm;
            if res < cfg.tol {
                residuals.push(norm(&s) / b_norm);
                return Ok(finish(half, residuals, it, res, SolverStatus::Converged));
            }
        }

        t.copy_from_slice(backend.spmv(&s)?);
        let tt = dot(&t, &t);
        if !usable(tt) {
            return Ok(finish(x, residuals, it, metric, SolverStatus::Breakdown("(t, t) = 0".into())));
        }
        omega = dot(&t, &s) / tt;
        if !usable(omega) {
            return Ok(finish(x, residuals, it, metric, SolverStatus::Breakdown("omega = 0".into())));
        }
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        let rel = norm(&r) / b_norm;
        residuals.push(rel);
        metric = rel;
        if rel < cfg.tol {
            let res = true_residual(backend, &x, b, &mut scratch)? / b_norm;
            metric = res;
            if res < cfg.tol {
                return Ok(finish(x, residuals, it, res, SolverStatus::Converged));
            }
            r.copy_from_slice(&scratch);
        }
        rho_prev = rho;
    }
    let res = true_residual(backend, &x, b, &mut scratch)? / b_norm;
    Ok(finish(x, residuals, cfg.max_iters, res, SolverStatus::MaxIterations))
}
