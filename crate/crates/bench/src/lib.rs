//! Shared inputs for the criterion benchmarks.

use merbit_core::fixtures::{random_matrix, random_vector, Structure};
use merbit_core::{CsrMatrix, Scalar};

pub struct Workload<T> {
    pub name: &'static str,
    pub matrix: CsrMatrix<T>,
    pub x: Vec<T>,
}

/// A regular, a skewed and a single-long-row matrix of comparable size.
pub fn workloads<T: Scalar>(nnz: usize) -> Vec<Workload<T>> {
    let shapes = [
        ("uniform", Structure::Uniform, 4096),
        ("powerlaw", Structure::PowerLaw, 4096),
        ("dense-row", Structure::DenseRow, 512),
    ];
    shapes
        .into_iter()
        .enumerate()
        .map(|(i, (name, kind, n))| {
            let matrix = random_matrix::<T>(kind, n, n.max(nnz / 8), nnz, i as u64);
            let x = random_vector(matrix.n_cols(), -1.0, 1.0, 100 + i as u64);
            Workload { name, matrix, x }
        })
        .collect()
}
