//! Merge-path sparse matrix-vector multiplication with reusable bit-field
//! tile descriptors, executed on a deterministic SIMT-style model.
//!
//! The crate is organized bottom-up:
//!
//! * [`sparse`]: COO/CSR containers, Matrix Market ingestion and the
//!   sequential reference kernels every other kernel is checked against.
//! * [`merge_path`]: merge-path geometry (diagonal search, the sequential
//!   walk, lane/tile partitioning).
//! * [`format`]: the packed tile metadata (`TileMetadata`), its generation,
//!   validation and binary cache.
//! * [`kernel`]: the tile-driven SpMV pipeline with the long-row fast path,
//!   warp segmented reduction and dual-buffer commit.
//! * [`baseline`]: the runtime merge-path kernel and the benchmark metrics.
//! * [`solvers`]: PageRank and BiCGSTAB over any [`solvers::SpmvBackend`].

pub mod baseline;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod kernel;
pub mod merge_path;
pub mod scalar;
pub mod solvers;
pub mod sparse;

pub use error::{Error, Result};
pub use format::{LaneDescriptor, LaneFields, SimtConfig, TileMetadata};
pub use kernel::{spmv_merbit, DualBuffer};
pub use merge_path::{MergeStep, PathCoord};
pub use scalar::{Precision, Scalar};
pub use sparse::{CooTriples, CsrMatrix};
