//! Sequential reference kernels. Each row is accumulated left to right in
//! ascending nonzero order; this fixed order is what determinism checks of
//! the other kernels compare against.

use crate::error::{Error, Result};
use crate::scalar::{Precision, Scalar};

use super::{CooTriples, CsrMatrix};

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub fn spmv_csr_reference<T: Scalar>(a: &CsrMatrix<T>, x: &[T]) -> Result<Vec<T>> {
    let mut y = vec![T::zero(); a.n_rows()];
    spmv_csr_reference_into(a, x, &mut y)?;
    Ok(y)
}

/// Overwrites `y` with `A x`.
pub fn spmv_csr_reference_into<T: Scalar>(a: &CsrMatrix<T>, x: &[T], y: &mut [T]) -> Result<()> {
    check_len(a.n_cols(), x.len())?;
    check_len(a.n_rows(), y.len())?;
    let offsets = a.row_offsets();
    let (cols, vals) = (a.col_indices(), a.values());
    for (r, out) in y.iter_mut().enumerate() {
        let mut sum = T::zero();
        for k in offsets[r]..offsets[r + 1] {
            sum += vals[k] * x[cols[k]];
        }
        *out = sum;
    }
    Ok(())
}

/// COO baseline over normalized triples. Produces the same bits as
/// [`spmv_csr_reference`] because it visits entries in the same order.
pub fn spmv_coo_reference<T: Scalar>(t: &CooTriples<T>, x: &[T]) -> Result<Vec<T>> {
    let mut y = vec![T::zero(); t.n_rows()];
    spmv_coo_reference_into(t, x, &mut y)?;
    Ok(y)
}

pub fn spmv_coo_reference_into<T: Scalar>(t: &CooTriples<T>, x: &[T], y: &mut [T]) -> Result<()> {
    check_len(t.n_cols(), x.len())?;
    check_len(t.n_rows(), y.len())?;
    if !t.is_normalized() {
        return Err(Error::InvalidMatrix(
            "COO baseline requires sorted, duplicate-free triples".into(),
        ));
    }
    y.fill(T::zero());
    for &(r, c, v) in t.entries() {
        y[r] += v * x[c];
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeGroup {
    /// Average degree at or below the threshold.
    Low,
    High,
}

impl DegreeGroup {
    pub fn label(self) -> &'static str {
        match self {
            DegreeGroup::Low => "G-L",
            DegreeGroup::High => "G-H",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub nnz: usize,
    pub n_rows: usize,
    pub avg_degree: f64,
    pub group: DegreeGroup,
    pub threshold: u32,
}

/// Average degree `nnz / n_rows`, grouped against the default steps-per-lane
/// of `precision`.
pub fn degree_stats<T: Scalar>(a: &CsrMatrix<T>, precision: Precision) -> Result<DegreeStats> {
    if a.n_rows() == 0 {
        return Err(Error::InvalidMatrix("degree of a zero-row matrix".into()));
    }
    let threshold = precision.default_sigma();
    // d <= threshold  <=>  nnz <= threshold * n_rows, compared exactly.
    let group = if a.nnz() as u128 <= threshold as u128 * a.n_rows() as u128 {
        DegreeGroup::Low
    } else {
        DegreeGroup::High
    };
    Ok(DegreeStats {
        nnz: a.nnz(),
        n_rows: a.n_rows(),
        avg_degree: a.nnz() as f64 / a.n_rows() as f64,
        group,
        threshold,
    })
}
