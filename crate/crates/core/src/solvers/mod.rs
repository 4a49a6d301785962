//! Iterative workloads driven through any SpMV backend.

mod backend;
mod bicgstab;
mod pagerank;

use std::fmt;
use std::time::Duration;

pub use backend::{
    CooBackend, KernelKind, MerbitBackend, MergeRuntimeBackend, ReferenceBackend, SpmvBackend,
};
pub use bicgstab::{bicgstab, BicgstabConfig, BicgstabResult};
pub use pagerank::{build_transition, pagerank, PageRankConfig, PageRankResult};

use crate::fixtures::random_vector;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum SolverStatus {
    Converged,
    MaxIterations,
    Breakdown(String),
}

impl SolverStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            SolverStatus::Converged => "converged",
            SolverStatus::MaxIterations => "max-iterations",
            SolverStatus::Breakdown(_) => "breakdown",
        }
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverStatus::Breakdown(why) => write!(f, "breakdown ({why})"),
            other => f.write_str(other.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// One-time backend preprocessing.
    pub t_p: Duration,
    /// Time spent in the iteration loop, convergence checks included.
    pub t_r: Duration,
    pub iterations: usize,
    /// ERR for PageRank, relative residual for BiCGSTAB.
    pub metric: f64,
    pub status: SolverStatus,
}

impl RunReport {
    pub fn total(&self) -> Duration {
        self.t_p + self.t_r
    }
}

/// Reproducible right-hand side or start vector, entries uniform in `[lo, hi]`.
pub fn seed_test_vector<T: Scalar>(n: usize, lo: f64, hi: f64, seed: u64) -> Vec<T> {
    random_vector(n, lo, hi, seed)
}
