//! Tile-driven SpMV on a deterministic SIMT model.
//!
//! Blocks of `block_size` lanes (`block_size / omega` warps, one tile per
//! warp) are independent work items on the rayon pool. Inside a block, warps
//! and lanes run in a fixed order, which is observationally equivalent to
//! lockstep execution: a warp barrier is a no-op and a block barrier is
//! program order.
//!
//! Per tile the kernel either skips it (no nonzeros), reduces it directly
//! (long-row mark) or stages its products, scans each lane's descriptor and
//! merges lane carries with a warp segmented reduction. Row partials live in
//! block scratch and are committed once per block. Rows a block shares with
//! its neighbours are resolved through a carry table reduced in ascending
//! block order, so results are bitwise reproducible for any thread count.

mod commit;
mod deposit;
mod dual;
mod fast;
mod segsum;
mod stage;
mod tackle;

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::{SimtConfig, TileMetadata};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

pub use commit::{commit_block, reduce_boundary_carries, BoundaryCarry};
pub use deposit::{Deposit, Shifted, Traced};
pub use dual::DualBuffer;
pub use fast::tile_fast_tackle;
pub use segsum::warp_segmented_sum;
pub use stage::load_smem;
pub use tackle::{tile_normal_tackle, LaneCarry};

use fast::fast_tackle_with;
use segsum::{segmented_sum_with, ScanWork};
use stage::stage_products;

/// The tiles, nonzeros and rows covered by one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRange {
    pub tiles: Range<usize>,
    pub x_bs: usize,
    pub x_be: usize,
    pub y_bs: usize,
    pub y_be: usize,
}

impl BlockRange {
    /// Products staged by the block (`m_b`).
    pub fn nnz(&self) -> usize {
        self.x_be - self.x_bs
    }

    /// Row slots the block needs, including its trailing row (`n_b`).
    pub fn row_slots(&self) -> usize {
        self.y_be - self.y_bs + 1
    }

    /// Rows only this block writes.
    pub fn interior(&self) -> Range<usize> {
        (self.y_bs + 1).min(self.y_be)..self.y_be
    }
}

pub fn block_ranges(t: &TileMetadata, c: &SimtConfig) -> Vec<BlockRange> {
    let warps = c.warps_per_block();
    let tiles = t.tile_num();
    (0..tiles.div_ceil(warps))
        .map(|b| {
            let (bs, be) = (b * warps, ((b + 1) * warps).min(tiles));
            BlockRange {
                tiles: bs..be,
                x_bs: t.tile_x()[bs] as usize,
                x_be: t.tile_x()[be] as usize,
                y_bs: t.tile_row(bs),
                y_be: t.tile_row(be),
            }
        })
        .collect()
}

/// Counters from one kernel pass; the bounds are checked by the tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KernelStats {
    pub blocks: usize,
    pub fast_tiles: usize,
    pub normal_tiles: usize,
    pub skipped_tiles: usize,
    /// Largest `m_b + n_b` over all blocks.
    pub max_scratch_used: usize,
    /// `block_size * sigma + 1`.
    pub scratch_bound: usize,
    pub max_lane_steps: usize,
    pub max_tile_steps: usize,
}

impl KernelStats {
    fn merge(&mut self, o: &KernelStats) {
        self.blocks += o.blocks;
        self.fast_tiles += o.fast_tiles;
        self.normal_tiles += o.normal_tiles;
        self.skipped_tiles += o.skipped_tiles;
        self.max_scratch_used = self.max_scratch_used.max(o.max_scratch_used);
        self.max_lane_steps = self.max_lane_steps.max(o.max_lane_steps);
        self.max_tile_steps = self.max_tile_steps.max(o.max_tile_steps);
    }
}

struct BlockWork<T> {
    scratch: Vec<T>,
    carries: Vec<LaneCarry<T>>,
    scan: ScanWork<T>,
    lanes: Vec<T>,
}

impl<T: Scalar> BlockWork<T> {
    fn new(c: &SimtConfig) -> Self {
        Self {
            scratch: vec![T::zero(); c.scratch_len()],
            carries: Vec::with_capacity(c.omega() as usize),
            scan: ScanWork::default(),
            lanes: Vec::with_capacity(c.omega() as usize),
        }
    }
}

struct Ctx<'a, T> {
    t: &'a TileMetadata,
    a: &'a CsrMatrix<T>,
    x: &'a [T],
    c: &'a SimtConfig,
}

fn run_tiles<T: Scalar, D: Deposit<T> + ?Sized>(
    ctx: &Ctx<'_, T>,
    r: &BlockRange,
    products: &mut [T],
    partials: &mut D,
    work: &mut BlockWork<T>,
    stats: &mut KernelStats,
) {
    let t = ctx.t;
    let omega = ctx.c.omega() as usize;
    let (values, cols) = (ctx.a.values(), ctx.a.col_indices());
    for i in r.tiles.clone() {
        let (x_ws, x_we) = (t.tile_x()[i] as usize, t.tile_x()[i + 1] as usize);
        let (y_ws, y_we) = (t.tile_row(i), t.tile_row(i + 1));
        stats.max_tile_steps = stats.max_tile_steps.max(x_we - x_ws + y_we - y_ws);
        if x_ws == x_we {
            stats.skipped_tiles += 1;
            continue;
        }
        let y_bw = y_ws - r.y_bs;
        let x_bw = x_ws - r.x_bs;
        let mut sink = Shifted {
            inner: &mut *partials,
            offset: y_bw,
        };
        if t.is_long_row(i) {
            stats.fast_tiles += 1;
            fast_tackle_with(
                &values[x_ws..x_we],
                &cols[x_ws..x_we],
                ctx.x,
                omega,
                &mut work.lanes,
                &mut sink,
                0,
            );
            continue;
        }
        stats.normal_tiles += 1;
        let staged = &mut products[x_bw..x_bw + (x_we - x_ws)];
        stage_products(&values[x_ws..x_we], &cols[x_ws..x_we], ctx.x, omega, staged);
        work.carries.clear();
        for lid in 0..omega {
            let j = i * omega + lid;
            if j < t.lane_num() {
                let steps = t.lane_nnz(j);
                stats.max_lane_steps = stats.max_lane_steps.max(steps);
                let carry = tile_normal_tackle(staged, t.lane_fields(j), steps, lid, &mut sink);
                work.carries.push(carry);
            } else {
                work.carries.push(LaneCarry::inactive(y_we - y_ws));
            }
        }
        segmented_sum_with(&work.carries, &mut work.scan, &mut sink);
    }
}

fn run_block<T: Scalar>(
    ctx: &Ctx<'_, T>,
    r: &BlockRange,
    work: &mut BlockWork<T>,
    active: &mut [T],
    inactive: &mut [T],
    log: Option<&mut Vec<(usize, T)>>,
) -> (BoundaryCarry<T>, KernelStats) {
    let (m_b, n_b) = (r.nnz(), r.row_slots());
    let mut stats = KernelStats {
        blocks: 1,
        max_scratch_used: m_b + n_b,
        ..KernelStats::default()
    };
    debug_assert!(
        m_b + n_b <= ctx.c.block_size() as usize * ctx.c.sigma() as usize + 1,
        "block scratch bound violated"
    );
    let mut scratch = std::mem::take(&mut work.scratch);
    let (products, rest) = scratch.split_at_mut(m_b);
    let partials = &mut rest[..n_b];
    partials.fill(T::zero());
    match log {
        Some(log) => {
            let mut traced = Traced {
                partials: &mut *partials,
                base_row: r.y_bs,
                log,
            };
            run_tiles(ctx, r, products, &mut traced, work, &mut stats);
        }
        None => run_tiles(ctx, r, products, &mut *partials, work, &mut stats),
    }
    let carry = commit_block(partials, r, ctx.a.n_rows(), active, inactive);
    work.scratch = scratch;
    (carry, stats)
}

/// Splits `buf` into the disjoint interior row ranges of `ranges`.
fn interior_slices<'b, T>(mut buf: &'b mut [T], ranges: &[BlockRange]) -> Vec<&'b mut [T]> {
    let mut out = Vec::with_capacity(ranges.len());
    let mut consumed = 0;
    for r in ranges {
        let rows = r.interior();
        let (_, tail) = buf.split_at_mut(rows.start - consumed);
        let (mine, tail) = tail.split_at_mut(rows.len());
        out.push(mine);
        buf = tail;
        consumed = rows.end;
    }
    out
}

fn check_inputs<T: Scalar>(
    t: &TileMetadata,
    a: &CsrMatrix<T>,
    x: &[T],
    d: &DualBuffer<T>,
    c: &SimtConfig,
) -> Result<()> {
    if !t.matches(c) {
        return Err(Error::ConfigMismatch(format!(
            "metadata built with omega={} sigma={}, kernel configured with {c}",
            t.omega(),
            t.sigma()
        )));
    }
    if t.nnz() != a.nnz() || t.n_rows() != a.n_rows() {
        return Err(Error::ConfigMismatch(format!(
            "metadata describes {} rows / {} nonzeros, matrix has {} / {}",
            t.n_rows(),
            t.nnz(),
            a.n_rows(),
            a.nnz()
        )));
    }
    if x.len() != a.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: a.n_cols(),
            got: x.len(),
        });
    }
    if d.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: a.n_rows(),
            got: d.len(),
        });
    }
    Ok(())
}

fn execute<T: Scalar>(
    t: &TileMetadata,
    a: &CsrMatrix<T>,
    x: &[T],
    d: &mut DualBuffer<T>,
    c: &SimtConfig,
    trace: bool,
) -> Result<(KernelStats, Vec<(usize, T)>)> {
    check_inputs(t, a, x, d, c)?;
    let ctx = Ctx { t, a, x, c };
    let ranges = block_ranges(t, c);
    let (active, inactive) = d.split_mut();
    let act = interior_slices(&mut *active, &ranges);
    let inact = interior_slices(&mut *inactive, &ranges);

    let results: Vec<_> = ranges
        .par_iter()
        .zip(act.into_par_iter().zip(inact.into_par_iter()))
        .map_init(
            || BlockWork::new(c),
            |work, (r, (act, inact))| {
                let mut log = trace.then(Vec::new);
                let (carry, stats) = run_block(&ctx, r, work, act, inact, log.as_mut());
                (carry, stats, log)
            },
        )
        .collect();

    let mut stats = KernelStats {
        scratch_bound: c.block_size() as usize * c.sigma() as usize + 1,
        ..KernelStats::default()
    };
    let mut carries = Vec::with_capacity(results.len());
    let mut deposits = Vec::new();
    for (carry, s, log) in results {
        carries.push(carry);
        stats.merge(&s);
        if let Some(log) = log {
            deposits.extend(log);
        }
    }
    reduce_boundary_carries(&carries, active, inactive);
    d.flip();
    Ok((stats, deposits))
}

/// `y = A x` into the active buffer of `d`, then flips its parity; read the
/// result with [`DualBuffer::output`].
pub fn spmv_merbit<T: Scalar>(
    t: &TileMetadata,
    a: &CsrMatrix<T>,
    x: &[T],
    d: &mut DualBuffer<T>,
    c: &SimtConfig,
) -> Result<()> {
    execute(t, a, x, d, c, false).map(|_| ())
}

/// [`spmv_merbit`] that also returns kernel counters.
pub fn spmv_merbit_stats<T: Scalar>(
    t: &TileMetadata,
    a: &CsrMatrix<T>,
    x: &[T],
    d: &mut DualBuffer<T>,
    c: &SimtConfig,
) -> Result<KernelStats> {
    execute(t, a, x, d, c, false).map(|(s, _)| s)
}

/// Accounting mode: additionally returns every deposit made into row
/// scratch as `(row, value)`, in block order.
pub fn spmv_merbit_traced<T: Scalar>(
    t: &TileMetadata,
    a: &CsrMatrix<T>,
    x: &[T],
    d: &mut DualBuffer<T>,
    c: &SimtConfig,
) -> Result<(KernelStats, Vec<(usize, T)>)> {
    execute(t, a, x, d, c, true)
}
