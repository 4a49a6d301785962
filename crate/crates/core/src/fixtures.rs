//! Deterministic test matrices: the 8x8 worked example, structural fuzz
//! generators, and graph / PDE fixtures for the iterative workloads.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::sparse::{CooTriples, CsrMatrix};

/// Row offsets of the 8x8, 34-nonzero worked example.
///
/// Row lengths are 5, 0, 7, 1, 7, 6, 3, 5. Under `omega = sigma = 4` this
/// reproduces the lanes of tile 0 (`(0,0)-(4,0)`, `(4,0)-(6,2)`,
/// `(6,2)-(10,2)`, `(10,2)-(13,3)`), tile 1's lane offsets
/// `x = [0,3,7,10]`, `y = [0,1,1,2]` and its first lane's `TFFF` flags.
pub const EXAMPLE_OFFSETS: [usize; 9] = [0, 5, 5, 12, 13, 20, 26, 29, 34];

const EXAMPLE_COLS: [&[usize]; 8] = [
    &[0, 1, 3, 5, 7],
    &[],
    &[0, 1, 2, 3, 4, 5, 6],
    &[3],
    &[1, 2, 3, 4, 5, 6, 7],
    &[0, 2, 3, 4, 6, 7],
    &[1, 4, 6],
    &[0, 2, 4, 5, 7],
];

/// The worked example with values `1, 2, ..., 34` in storage order.
pub fn example_matrix<T: Scalar>() -> CsrMatrix<T> {
    let cols: Vec<usize> = EXAMPLE_COLS.iter().flat_map(|r| r.iter().copied()).collect();
    let values = (1..=cols.len()).map(|v| T::from_f64(v as f64)).collect();
    CsrMatrix::from_parts(8, 8, EXAMPLE_OFFSETS.to_vec(), cols, values).expect("example is valid CSR")
}

/// Structural families used for fuzzing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Uniform,
    PowerLaw,
    Banded,
    DenseRow,
    AllEmpty,
    ManyEmptyRows,
}

impl Structure {
    pub const ALL: [Structure; 6] = [
        Structure::Uniform,
        Structure::PowerLaw,
        Structure::Banded,
        Structure::DenseRow,
        Structure::AllEmpty,
        Structure::ManyEmptyRows,
    ];
}

fn value<T: Scalar>(rng: &mut impl Rng) -> T {
    T::from_f64(rng.gen_range(-1.0..=1.0))
}

fn row_with<T: Scalar>(
    rng: &mut impl Rng,
    entries: &mut Vec<(usize, usize, T)>,
    row: usize,
    n_cols: usize,
    len: usize,
) {
    for c in sample(rng, n_cols, len.min(n_cols)) {
        entries.push((row, c, value(rng)));
    }
}

/// A random matrix of the given structure with roughly `target_nnz`
/// nonzeros and values uniform in `[-1, 1]`.
pub fn random_matrix<T: Scalar>(
    kind: Structure,
    n_rows: usize,
    n_cols: usize,
    target_nnz: usize,
    seed: u64,
) -> CsrMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(target_nnz);
    if n_rows > 0 && n_cols > 0 {
        match kind {
            Structure::Uniform => {
                for _ in 0..target_nnz {
                    let (r, c) = (rng.gen_range(0..n_rows), rng.gen_range(0..n_cols));
                    entries.push((r, c, value(&mut rng)));
                }
            }
            Structure::PowerLaw => {
                let mut rows: Vec<usize> = (0..n_rows).collect();
                rows.shuffle(&mut rng);
                let harmonic: f64 = (1..=n_rows).map(|k| 1.0 / (k as f64).powf(1.2)).sum();
                for (rank, &row) in rows.iter().enumerate() {
                    let share = 1.0 / ((rank + 1) as f64).powf(1.2) / harmonic;
                    let len = (share * target_nnz as f64).round() as usize;
                    row_with(&mut rng, &mut entries, row, n_cols, len);
                }
            }
            Structure::Banded => {
                let half = (target_nnz / n_rows.max(1)) / 2;
                for r in 0..n_rows {
                    let lo = r.saturating_sub(half);
                    let hi = (r + half + 1).min(n_cols);
                    for c in lo..hi {
                        entries.push((r, c, value(&mut rng)));
                    }
                }
            }
            Structure::DenseRow => {
                let dense = rng.gen_range(0..n_rows);
                for c in 0..n_cols {
                    entries.push((dense, c, value(&mut rng)));
                }
                let extra = target_nnz.saturating_sub(n_cols);
                for _ in 0..extra / 4 {
                    let (r, c) = (rng.gen_range(0..n_rows), rng.gen_range(0..n_cols));
                    entries.push((r, c, value(&mut rng)));
                }
            }
            Structure::AllEmpty => {}
            Structure::ManyEmptyRows => {
                let active: Vec<usize> = (0..n_rows).filter(|_| rng.gen_bool(0.2)).collect();
                if !active.is_empty() {
                    let mean = (target_nnz / active.len()).max(1);
                    for &r in &active {
                        let len = rng.gen_range(0..=2 * mean);
                        row_with(&mut rng, &mut entries, r, n_cols, len);
                    }
                }
            }
        }
    }
    CooTriples::new(n_rows, n_cols, entries)
        .expect("generated indices are in bounds")
        .into()
}

/// A dense vector with entries uniform in `[lo, hi]`.
pub fn random_vector<T: Scalar>(len: usize, lo: f64, hi: f64, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| T::from_f64(rng.gen_range(lo..=hi))).collect()
}

/// Five-point Laplacian on a `k x k` grid (Dirichlet boundary), order `k*k`.
pub fn laplacian_2d<T: Scalar>(k: usize) -> CsrMatrix<T> {
    let idx = |i: usize, j: usize| i * k + j;
    let mut entries = Vec::with_capacity(5 * k * k);
    for i in 0..k {
        for j in 0..k {
            let r = idx(i, j);
            entries.push((r, r, T::from_f64(4.0)));
            if i > 0 {
                entries.push((r, idx(i - 1, j), -T::one()));
            }
            if i + 1 < k {
                entries.push((r, idx(i + 1, j), -T::one()));
            }
            if j > 0 {
                entries.push((r, idx(i, j - 1), -T::one()));
            }
            if j + 1 < k {
                entries.push((r, idx(i, j + 1), -T::one()));
            }
        }
    }
    CooTriples::new(k * k, k * k, entries).expect("in bounds").into()
}

/// Directed graph adjacency (`A[i][j] = 1` for an edge `i -> j`) on `n`
/// nodes: a Hamiltonian cycle, so it is strongly connected, plus
/// `extra_per_node` random edges per node.
pub fn strongly_connected_graph<T: Scalar>(n: usize, extra_per_node: usize, seed: u64) -> CsrMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(n * (extra_per_node + 1));
    for i in 0..n {
        entries.push((i, (i + 1) % n, T::one()));
        for _ in 0..extra_per_node {
            let j = rng.gen_range(0..n);
            if j != i {
                entries.push((i, j, T::one()));
            }
        }
    }
    // Duplicate edges collapse to a single stored entry with value 1.
    let a: CsrMatrix<T> = CooTriples::new(n, n, entries).expect("in bounds").into();
    a.map_values(|_| T::one())
}

/// Random undirected graph with unit weights (symmetric pattern, all ones).
pub fn undirected_graph<T: Scalar>(n: usize, edges: usize, seed: u64) -> CsrMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(2 * edges);
    for _ in 0..edges {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        entries.push((i, j, T::one()));
        entries.push((j, i, T::one()));
    }
    let a: CsrMatrix<T> = CooTriples::new(n, n, entries).expect("in bounds").into();
    a.map_values(|_| T::one())
}
