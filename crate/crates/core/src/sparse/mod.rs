//! Sparse containers, Matrix Market ingestion and the sequential reference
//! kernels.

mod coo;
mod csr;
mod mtx;
mod reference;

pub use coo::CooTriples;
pub use csr::CsrMatrix;
pub use mtx::{parse_matrix_market, read_matrix_market, write_matrix_market};
pub use reference::{
    degree_stats, spmv_coo_reference, spmv_coo_reference_into, spmv_csr_reference, spmv_csr_reference_into,
    DegreeGroup, DegreeStats,
};
