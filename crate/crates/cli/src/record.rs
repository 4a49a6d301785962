//! Versioned output rows. Durations are stored as integer nanoseconds so
//! that derived columns can be recomputed bit for bit.

use std::time::Duration;

use merbit_core::baseline::{speedup, throughput};
use merbit_core::Result;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema_version: u32,
    pub dataset: String,
    pub kernel: String,
    pub precision: String,
    pub omega: u32,
    pub sigma: u32,
    pub block_size: u32,
    pub n_rows: u64,
    pub nnz: u64,
    pub iterations: u64,
    pub warmup: u64,
    /// Mean duration of one SpMV.
    pub mean_ns: u64,
    /// Mean duration of one COO SpMV measured in the same run.
    pub baseline_mean_ns: u64,
    /// Floating point operations per second, `2 nnz / mean`.
    pub ct: f64,
    /// `baseline_mean / mean`.
    pub speedup: f64,
    pub t_p_ns: u64,
    /// Preprocessing time in units of one SpMV.
    pub t_p_over_t: Option<f64>,
    pub r_f: Option<f64>,
    /// Metadata bytes from the footprint model.
    pub mem_sigma: Option<f64>,
    pub avg_degree: f64,
    pub degree_group: String,
}

impl BenchRecord {
    pub fn mean(&self) -> Duration {
        Duration::from_nanos(self.mean_ns)
    }

    pub fn recompute_ct(&self) -> Result<f64> {
        throughput(self.nnz as usize, self.mean())
    }

    pub fn recompute_speedup(&self) -> Result<f64> {
        speedup(Duration::from_nanos(self.baseline_mean_ns), self.mean())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub schema_version: u32,
    pub dataset: String,
    pub precision: String,
    pub omega: u32,
    pub sigma: u32,
    pub block_size: u32,
    pub mean_ns: u64,
    pub baseline_mean_ns: u64,
    pub speedup: f64,
    pub r_f: f64,
    pub mem_sigma: f64,
    /// Block scratch bytes, `(block_size + 1) * sigma` values.
    pub smem_sigma: u64,
    /// Output agreed with the reference kernel.
    pub validated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRecord {
    pub schema_version: u32,
    pub solver: String,
    pub dataset: String,
    pub kernel: String,
    pub precision: String,
    pub omega: u32,
    pub sigma: u32,
    pub block_size: u32,
    pub n_rows: u64,
    pub nnz: u64,
    pub status: String,
    pub iterations: u64,
    /// ERR for PageRank, relative residual for BiCGSTAB.
    pub metric: f64,
    pub t_p_ns: u64,
    pub t_r_ns: u64,
    pub t_ns: u64,
}
