use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::CooTriples;

/// Compressed sparse row matrix.
///
/// Invariants: `row_offsets[0] == 0`, `row_offsets[n_rows] == nnz`, offsets are
/// nondecreasing, column indices are strictly increasing within a row and
/// below `n_cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(Error::InvalidMatrix(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            )));
        }
        if col_indices.len() != values.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} column indices but {} values",
                col_indices.len(),
                values.len()
            )));
        }
        if row_offsets[0] != 0 || row_offsets[n_rows] != values.len() {
            return Err(Error::InvalidMatrix(
                "row_offsets must start at 0 and end at nnz".into(),
            ));
        }
        for row in 0..n_rows {
            let (start, end) = (row_offsets[row], row_offsets[row + 1]);
            if start > end {
                return Err(Error::InvalidMatrix(format!(
                    "row_offsets decreases at row {row}"
                )));
            }
            let cols = &col_indices[start..end];
            if let Some(&col) = cols.iter().find(|&&c| c >= n_cols) {
                return Err(Error::IndexOutOfBounds {
                    row,
                    col,
                    n_rows,
                    n_cols,
                });
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "column indices of row {row} are not strictly increasing"
                )));
            }
        }
        Ok(Self::from_parts_unchecked(
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        ))
    }

    pub(crate) fn from_parts_unchecked(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts_unchecked(n, n, (0..=n).collect(), (0..n).collect(), vec![T::one(); n])
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self::from_parts_unchecked(n_rows, n_cols, vec![0; n_rows + 1], vec![], vec![])
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row_nnz(&self, row: usize) -> usize {
        self.row_offsets[row + 1] - self.row_offsets[row]
    }

    /// Column indices and values of one row.
    pub fn row(&self, row: usize) -> (&[usize], &[T]) {
        let range = self.row_offsets[row]..self.row_offsets[row + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// Expands back to normalized triples in row-major order.
    pub fn to_triples(&self) -> CooTriples<T> {
        let entries = (0..self.n_rows)
            .flat_map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
            })
            .collect();
        CooTriples::new(self.n_rows, self.n_cols, entries).expect("CSR indices are in bounds")
    }

    pub fn transpose(&self) -> Self {
        let entries = self
            .to_triples()
            .entries()
            .iter()
            .map(|&(r, c, v)| (c, r, v))
            .collect();
        CooTriples::new(self.n_cols, self.n_rows, entries)
            .expect("transposed indices are in bounds")
            .into()
    }

    /// True when the sparsity pattern equals that of the transpose.
    pub fn is_structurally_symmetric(&self) -> bool {
        let t = self.transpose();
        self.row_offsets == t.row_offsets && self.col_indices == t.col_indices
    }

    pub fn map_values<U: Scalar>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix::from_parts_unchecked(
            self.n_rows,
            self.n_cols,
            self.row_offsets.clone(),
            self.col_indices.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn cast<U: Scalar>(&self) -> CsrMatrix<U> {
        self.map_values(|v| U::from_f64(v.as_f64()))
    }

    pub fn max_abs_value(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}
