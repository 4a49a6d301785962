//! Comparison kernels and timing arithmetic.
//!
//! [`spmv_merge_runtime`] partitions the merge path at run time: every lane
//! binary searches its own start coordinate and walks its segment. It shares
//! no code with the tile-driven kernel and serves as a second oracle.

use std::time::Duration;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::SimtConfig;
use crate::merge_path::{merge_search, PathCoord};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

pub use crate::sparse::{spmv_coo_reference, spmv_csr_reference};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MergeRunStats {
    pub lanes: usize,
    /// Path steps walked summed over all lanes.
    pub steps: usize,
}

pub fn spmv_merge_runtime<T: Scalar>(a: &CsrMatrix<T>, x: &[T], c: &SimtConfig) -> Result<Vec<T>> {
    let mut y = vec![T::zero(); a.n_rows()];
    spmv_merge_runtime_into(a, x, &mut y, c)?;
    Ok(y)
}

/// Overwrites `y` with `A x` and reports the work done.
pub fn spmv_merge_runtime_into<T: Scalar>(
    a: &CsrMatrix<T>,
    x: &[T],
    y: &mut [T],
    c: &SimtConfig,
) -> Result<MergeRunStats> {
    if x.len() != a.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: a.n_cols(),
            got: x.len(),
        });
    }
    if y.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: y.len(),
        });
    }
    let (m, n) = (a.nnz(), a.n_rows());
    let total = m + n;
    let sigma = c.sigma() as usize;
    let lanes = total.div_ceil(sigma);
    let offsets = a.row_offsets();

    let starts: Vec<PathCoord> = (0..=lanes)
        .into_par_iter()
        .map(|j| merge_search(offsets, (j * sigma).min(total), n, m))
        .collect::<Result<_>>()?;

    // Lane j finishes rows [starts[j].y, starts[j+1].y), which are disjoint.
    let mut rest = &mut *y;
    let mut slices = Vec::with_capacity(lanes);
    for w in starts.windows(2) {
        let (mine, tail) = rest.split_at_mut(w[1].y - w[0].y);
        slices.push(mine);
        rest = tail;
    }

    let (values, cols) = (a.values(), a.col_indices());
    let carries: Vec<(usize, T, usize)> = starts
        .par_windows(2)
        .zip(slices.into_par_iter())
        .map(|(w, out)| {
            let (begin, end) = (w[0], w[1]);
            let (mut col, mut row) = (begin.x, begin.y);
            let mut sum = T::zero();
            let mut steps = 0;
            while col + row < end.x + end.y {
                if col < offsets[row + 1] {
                    sum += values[col] * x[cols[col]];
                    col += 1;
                } else {
                    out[row - begin.y] = sum;
                    sum = T::zero();
                    row += 1;
                }
                steps += 1;
            }
            (row, sum, steps)
        })
        .collect();

    let mut stats = MergeRunStats { lanes, steps: 0 };
    for (row, sum, steps) in carries {
        stats.steps += steps;
        if row < n {
            y[row] += sum;
        } else {
            debug_assert!(sum == T::zero());
        }
    }
    Ok(stats)
}

fn positive(d: Duration, what: &str) -> Result<f64> {
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("{what} duration must be positive")));
    }
    Ok(d.as_secs_f64())
}

/// `t_baseline / t_kernel`; above 1 means the kernel is faster.
pub fn speedup(t_baseline: Duration, t_kernel: Duration) -> Result<f64> {
    Ok(positive(t_baseline, "baseline")? / positive(t_kernel, "kernel")?)
}

pub fn geometric_mean(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() || ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidArgument(
            "geometric mean needs a non-empty list of positive ratios".into(),
        ));
    }
    let log_sum: f64 = ratios.iter().map(|r| r.ln()).sum();
    Ok((log_sum / ratios.len() as f64).exp())
}

/// Floating point operations per second for one SpMV, `2 nnz / t`.
pub fn throughput(nnz: usize, t: Duration) -> Result<f64> {
    Ok(2.0 * nnz as f64 / positive(t, "kernel")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_matrix, random_matrix, random_vector, Structure};

    fn cfg(w: u32, s: u32) -> SimtConfig {
        SimtConfig::with_default_block(w, s).unwrap()
    }

    #[test]
    fn example_matches_reference() {
        let a = example_matrix::<f64>();
        let x = vec![1.0; 8];
        let want = spmv_csr_reference(&a, &x).unwrap();
        for (w, s) in [(4, 4), (32, 7), (1, 1), (2, 5)] {
            assert_eq!(spmv_merge_runtime(&a, &x, &cfg(w, s)).unwrap(), want);
        }
    }

    #[test]
    fn identity_and_empty() {
        let x: Vec<f32> = (0..20).map(|v| v as f32).collect();
        let id = CsrMatrix::<f32>::identity(20);
        assert_eq!(spmv_merge_runtime(&id, &x, &cfg(4, 4)).unwrap(), x);
        let z = CsrMatrix::<f32>::zeros(7, 20);
        assert_eq!(spmv_merge_runtime(&z, &x, &cfg(4, 4)).unwrap(), vec![0.0; 7]);
        let none = CsrMatrix::<f32>::zeros(0, 0);
        assert!(spmv_merge_runtime(&none, &[], &cfg(4, 4)).unwrap().is_empty());
    }

    #[test]
    fn steps_cover_path_exactly() {
        for (i, kind) in Structure::ALL.iter().enumerate() {
            let a = random_matrix::<f64>(*kind, 90, 70, 800, i as u64);
            let x = random_vector::<f64>(70, -1.0, 1.0, 9);
            let mut y = vec![f64::NAN; 90];
            let stats = spmv_merge_runtime_into(&a, &x, &mut y, &cfg(4, 3)).unwrap();
            assert_eq!(stats.steps, a.nnz() + a.n_rows());
            let want = spmv_csr_reference(&a, &x).unwrap();
            for (g, e) in y.iter().zip(&want) {
                assert!((g - e).abs() <= 1e-12, "{kind:?}");
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = example_matrix::<f64>();
        assert!(matches!(
            spmv_merge_runtime(&a, &[1.0; 3], &cfg(4, 4)),
            Err(Error::DimensionMismatch { expected: 8, got: 3 })
        ));
    }

    #[test]
    fn timing_arithmetic() {
        let ms = Duration::from_millis;
        assert_eq!(speedup(ms(10), ms(8)).unwrap(), 1.25);
        assert_eq!(speedup(ms(10), ms(10)).unwrap(), 1.0);
        assert!(speedup(ms(10), Duration::ZERO).is_err());
        assert!((geometric_mean(&[1.0, 4.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!(geometric_mean(&[]).is_err());
        assert!(geometric_mean(&[1.0, 0.0]).is_err());
        assert_eq!(throughput(10_000_000, ms(1)).unwrap(), 2e10);
        assert_eq!(throughput(0, ms(1)).unwrap(), 0.0);
        assert_eq!(throughput(34, Duration::from_secs(1)).unwrap(), 68.0);
        assert!(throughput(34, Duration::ZERO).is_err());
    }
}
