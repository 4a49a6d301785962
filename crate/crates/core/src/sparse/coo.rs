use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::CsrMatrix;

/// Coordinate-format triples, possibly unsorted and with duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CooTriples<T> {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> CooTriples<T> {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<(usize, usize, T)>) -> Result<Self> {
        if let Some(&(row, col, _)) = entries.iter().find(|&&(r, c, _)| r >= n_rows || c >= n_cols) {
            return Err(Error::IndexOutOfBounds {
                row,
                col,
                n_rows,
                n_cols,
            });
        }
        Ok(Self {
            n_rows,
            n_cols,
            entries,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when entries are sorted by `(row, col)` with no duplicates.
    pub fn is_normalized(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1))
    }

    /// Sorts by `(row, col)` and sums duplicate coordinates. Duplicates are
    /// summed in their original input order.
    pub fn normalize(mut self) -> Self {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(usize, usize, T)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => out.push((r, c, v)),
            }
        }
        self.entries = out;
        self
    }

    pub fn to_csr(&self) -> CsrMatrix<T> {
        coo_to_csr(self.clone())
    }
}

/// Converts triples to CSR: entries sorted by `(row, col)`, duplicates summed,
/// empty rows kept as repeated offsets.
pub(crate) fn coo_to_csr<T: Scalar>(t: CooTriples<T>) -> CsrMatrix<T> {
    let t = t.normalize();
    let mut row_offsets = vec![0usize; t.n_rows + 1];
    for &(r, _, _) in &t.entries {
        row_offsets[r + 1] += 1;
    }
    for i in 0..t.n_rows {
        row_offsets[i + 1] += row_offsets[i];
    }
    let (col_indices, values) = t.entries.iter().map(|&(_, c, v)| (c, v)).unzip();
    CsrMatrix::from_parts_unchecked(t.n_rows, t.n_cols, row_offsets, col_indices, values)
}

impl<T: Scalar> From<CooTriples<T>> for CsrMatrix<T> {
    fn from(t: CooTriples<T>) -> Self {
        coo_to_csr(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let t = CooTriples::new(1, 1, vec![(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        let a = CsrMatrix::from(t);
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.values(), &[3.0]);
    }

    #[test]
    fn all_empty_has_repeated_offsets() {
        let t = CooTriples::<f64>::new(3, 3, vec![]).unwrap();
        let a = CsrMatrix::from(t);
        assert_eq!(a.row_offsets(), &[0, 0, 0, 0]);
    }

    #[test]
    fn sorted_by_row() {
        let t = CooTriples::new(2, 3, vec![(1, 2, 4.0), (0, 1, 3.0)]).unwrap();
        let a = CsrMatrix::from(t);
        assert_eq!(a.row_offsets(), &[0, 1, 2]);
        assert_eq!(a.col_indices(), &[1, 2]);
        assert_eq!(a.values(), &[3.0, 4.0]);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let err = CooTriples::new(2, 2, vec![(2, 0, 1.0f64)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfBounds { row: 2, .. }));
    }

    #[test]
    fn normalized_detection() {
        let t = CooTriples::new(2, 2, vec![(1, 0, 1.0f32), (0, 1, 1.0)]).unwrap();
        assert!(!t.is_normalized());
        assert!(t.normalize().is_normalized());
    }
}
