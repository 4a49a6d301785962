use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::baseline::spmv_merge_runtime_into;
use crate::error::{Error, Result};
use crate::format::{generate_tile, SimtConfig, TileMetadata};
use crate::kernel::{spmv_merbit, DualBuffer};
use crate::scalar::Scalar;
use crate::sparse::{spmv_coo_reference_into, spmv_csr_reference_into, CooTriples, CsrMatrix};

/// A prepared `y = A x` operator. The returned slice stays valid until the
/// next call.
pub trait SpmvBackend<T: Scalar> {
    fn kind(&self) -> KernelKind;
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    /// Time spent preparing the operator.
    fn preprocessing(&self) -> Duration;
    fn spmv(&mut self, x: &[T]) -> Result<&[T]>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Csr,
    Coo,
    Merbit,
    MergeRuntime,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [KernelKind::Coo, KernelKind::Csr, KernelKind::MergeRuntime, KernelKind::Merbit];

    pub fn id(self) -> &'static str {
        match self {
            KernelKind::Csr => "csr",
            KernelKind::Coo => "coo",
            KernelKind::Merbit => "merbit",
            KernelKind::MergeRuntime => "merge",
        }
    }

    pub fn build<'a, T: Scalar>(
        self,
        a: &'a CsrMatrix<T>,
        c: &SimtConfig,
    ) -> Result<Box<dyn SpmvBackend<T> + 'a>> {
        Ok(match self {
            KernelKind::Csr => Box::new(ReferenceBackend::new(a)),
            KernelKind::Coo => Box::new(CooBackend::new(a)),
            KernelKind::Merbit => Box::new(MerbitBackend::new(a, c)?),
            KernelKind::MergeRuntime => Box::new(MergeRuntimeBackend::new(a, c)),
        })
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.id() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown kernel '{s}' (expected coo, csr, merge or merbit)")))
    }
}

pub struct ReferenceBackend<'a, T> {
    a: &'a CsrMatrix<T>,
    y: Vec<T>,
}

impl<'a, T: Scalar> ReferenceBackend<'a, T> {
    pub fn new(a: &'a CsrMatrix<T>) -> Self {
        Self {
            a,
            y: vec![T::zero(); a.n_rows()],
        }
    }
}

impl<T: Scalar> SpmvBackend<T> for ReferenceBackend<'_, T> {
    fn kind(&self) -> KernelKind {
        KernelKind::Csr
    }
    fn n_rows(&self) -> usize {
        self.a.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.a.n_cols()
    }
    fn preprocessing(&self) -> Duration {
        Duration::ZERO
    }
    fn spmv(&mut self, x: &[T]) -> Result<&[T]> {
        spmv_csr_reference_into(self.a, x, &mut self.y)?;
        Ok(&self.y)
    }
}

/// The COO baseline. Expanding CSR into triples is format conversion, not
/// kernel preprocessing, so it is not reported.
pub struct CooBackend<T> {
    triples: CooTriples<T>,
    y: Vec<T>,
}

impl<T: Scalar> CooBackend<T> {
    pub fn new(a: &CsrMatrix<T>) -> Self {
        Self {
            triples: a.to_triples(),
            y: vec![T::zero(); a.n_rows()],
        }
    }
}

impl<T: Scalar> SpmvBackend<T> for CooBackend<T> {
    fn kind(&self) -> KernelKind {
        KernelKind::Coo
    }
    fn n_rows(&self) -> usize {
        self.triples.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.triples.n_cols()
    }
    fn preprocessing(&self) -> Duration {
        Duration::ZERO
    }
    fn spmv(&mut self, x: &[T]) -> Result<&[T]> {
        spmv_coo_reference_into(&self.triples, x, &mut self.y)?;
        Ok(&self.y)
    }
}

pub struct MergeRuntimeBackend<'a, T> {
    a: &'a CsrMatrix<T>,
    config: SimtConfig,
    y: Vec<T>,
}

impl<'a, T: Scalar> MergeRuntimeBackend<'a, T> {
    pub fn new(a: &'a CsrMatrix<T>, c: &SimtConfig) -> Self {
        Self {
            a,
            config: *c,
            y: vec![T::zero(); a.n_rows()],
        }
    }
}

impl<T: Scalar> SpmvBackend<T> for MergeRuntimeBackend<'_, T> {
    fn kind(&self) -> KernelKind {
        KernelKind::MergeRuntime
    }
    fn n_rows(&self) -> usize {
        self.a.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.a.n_cols()
    }
    fn preprocessing(&self) -> Duration {
        Duration::ZERO
    }
    fn spmv(&mut self, x: &[T]) -> Result<&[T]> {
        spmv_merge_runtime_into(self.a, x, &mut self.y, &self.config)?;
        Ok(&self.y)
    }
}

/// Tile-driven kernel with metadata built once; output alternates between
/// the two halves of a [`DualBuffer`].
pub struct MerbitBackend<'a, T> {
    a: &'a CsrMatrix<T>,
    config: SimtConfig,
    tile: TileMetadata,
    buffers: DualBuffer<T>,
    t_p: Duration,
}

impl<'a, T: Scalar> MerbitBackend<'a, T> {
    pub fn new(a: &'a CsrMatrix<T>, c: &SimtConfig) -> Result<Self> {
        let start = Instant::now();
        let tile = generate_tile(a, c)?;
        let t_p = start.elapsed();
        Ok(Self {
            a,
            config: *c,
            tile,
            buffers: DualBuffer::new(a.n_rows()),
            t_p,
        })
    }

    pub fn tile(&self) -> &TileMetadata {
        &self.tile
    }

    pub fn buffers(&self) -> &DualBuffer<T> {
        &self.buffers
    }
}

impl<T: Scalar> SpmvBackend<T> for MerbitBackend<'_, T> {
    fn kind(&self) -> KernelKind {
        KernelKind::Merbit
    }
    fn n_rows(&self) -> usize {
        self.a.n_rows()
    }
    fn n_cols(&self) -> usize {
        self.a.n_cols()
    }
    fn preprocessing(&self) -> Duration {
        self.t_p
    }
    fn spmv(&mut self, x: &[T]) -> Result<&[T]> {
        spmv_merbit(&self.tile, self.a, x, &mut self.buffers, &self.config)?;
        Ok(self.buffers.output())
    }
}
