use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::merge_path::{merge_search_counted, MergeStep, PathCoord};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

use super::{pack_descriptor, unpack_descriptor, LaneDescriptor, LaneFields, SimtConfig};

/// Most significant bit of a `tile_y` entry: the tile never leaves its
/// starting row.
pub const LONG_ROW_MARK: u32 = 0x8000_0000;
pub const ROW_MASK: u32 = !LONG_ROW_MARK;

/// Number of valid steps in lane `lane` of a path of `path_len` steps.
pub fn lane_nnz(lane: usize, path_len: usize, sigma: usize) -> usize {
    if (lane + 1) * sigma < path_len {
        sigma
    } else {
        path_len - lane * sigma
    }
}

/// The reusable schedule of one matrix under one `(omega, sigma)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileMetadata {
    layout: SimtConfig,
    m: usize,
    n: usize,
    tile_x: Vec<u32>,
    tile_y: Vec<u32>,
    lane_desc: Vec<LaneDescriptor>,
}

/// Work counters gathered while generating tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenerationStats {
    /// Largest number of binary-search probes made for a single lane.
    pub max_probes: u32,
    /// Largest number of simulated steps for a single lane.
    pub max_sim_steps: u32,
    pub lanes: usize,
}

impl TileMetadata {
    /// Assembles metadata from raw arrays, checking only their lengths.
    /// Use [`reconstruct_path`] to validate the contents.
    pub fn from_raw(
        omega: u32,
        sigma: u32,
        m: usize,
        n: usize,
        tile_x: Vec<u32>,
        tile_y: Vec<u32>,
        lane_desc: Vec<LaneDescriptor>,
    ) -> Result<Self> {
        let layout = SimtConfig::new(omega, sigma, omega)?;
        let path_len = m + n;
        let tile_num = path_len.div_ceil(layout.tile_span());
        let lane_num = path_len.div_ceil(sigma as usize);
        if tile_x.len() != tile_num + 1 || tile_y.len() != tile_num + 1 || lane_desc.len() != lane_num {
            return Err(Error::Corrupt(format!(
                "array lengths ({}, {}, {}) do not match tile_num = {tile_num}, lane_num = {lane_num}",
                tile_x.len(),
                tile_y.len(),
                lane_desc.len()
            )));
        }
        Ok(Self {
            layout,
            m,
            n,
            tile_x,
            tile_y,
            lane_desc,
        })
    }

    pub fn omega(&self) -> u32 {
        self.layout.omega()
    }

    pub fn sigma(&self) -> u32 {
        self.layout.sigma()
    }

    /// Descriptor layout (block size set to one warp).
    pub fn layout(&self) -> &SimtConfig {
        &self.layout
    }

    pub fn nnz(&self) -> usize {
        self.m
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn path_len(&self) -> usize {
        self.m + self.n
    }

    pub fn tile_num(&self) -> usize {
        self.tile_x.len() - 1
    }

    pub fn lane_num(&self) -> usize {
        self.lane_desc.len()
    }

    pub fn tile_x(&self) -> &[u32] {
        &self.tile_x
    }

    pub fn tile_y(&self) -> &[u32] {
        &self.tile_y
    }

    pub fn lane_desc(&self) -> &[LaneDescriptor] {
        &self.lane_desc
    }

    /// Starting row of tile `i` with the long-row mark stripped.
    pub fn tile_row(&self, i: usize) -> usize {
        (self.tile_y[i] & ROW_MASK) as usize
    }

    pub fn is_long_row(&self, i: usize) -> bool {
        self.tile_y[i] & LONG_ROW_MARK != 0
    }

    pub fn tile_start(&self, i: usize) -> PathCoord {
        PathCoord::new(self.tile_x[i] as usize, self.tile_row(i))
    }

    pub fn lane_nnz(&self, lane: usize) -> usize {
        lane_nnz(lane, self.path_len(), self.sigma() as usize)
    }

    pub fn lane_fields(&self, lane: usize) -> LaneFields {
        unpack_descriptor(self.lane_desc[lane], &self.layout)
    }

    /// True when `c` uses the same `omega` and `sigma` this metadata was built with.
    pub fn matches(&self, c: &SimtConfig) -> bool {
        c.omega() == self.omega() && c.sigma() == self.sigma()
    }

    pub fn marked_tiles(&self) -> usize {
        self.tile_y[..self.tile_num()]
            .iter()
            .filter(|&&y| y & LONG_ROW_MARK != 0)
            .count()
    }

    /// Bytes held by the three arrays.
    pub fn allocated_bytes(&self) -> usize {
        4 * (self.tile_x.len() + self.tile_y.len() + self.lane_desc.len())
    }

    /// Bytes a kernel pass reads from the metadata: both coordinate arrays,
    /// plus the descriptors of tiles that are not fast-tackled.
    pub fn traffic_bytes(&self) -> usize {
        let omega = self.omega() as usize;
        let unmarked_lanes: usize = (0..self.tile_num())
            .filter(|&i| !self.is_long_row(i))
            .map(|i| (self.lane_num() - i * omega).min(omega))
            .sum();
        4 * (self.tile_x.len() + self.tile_y.len()) + 4 * unmarked_lanes
    }
}

struct TileOut {
    x: u32,
    y: u32,
    desc: Vec<LaneDescriptor>,
    stats: GenerationStats,
}

fn generate_one_tile(
    offsets: &[usize],
    tile: usize,
    m: usize,
    n: usize,
    lane_num: usize,
    layout: &SimtConfig,
) -> Result<TileOut> {
    let omega = layout.omega() as usize;
    let sigma = layout.sigma() as usize;
    let first = tile * omega;
    let last = (first + omega).min(lane_num);
    let mut desc = Vec::with_capacity(last - first);
    let mut stats = GenerationStats::default();
    let mut tile_start = PathCoord::default();
    let mut single_row = true;

    for j in first..last {
        let (start, probes) = merge_search_counted(offsets, j * sigma, n, m)?;
        if j == first {
            tile_start = start;
        }
        let (mut x, mut y) = (start.x, start.y);
        let steps = lane_nnz(j, m + n, sigma);
        let mut bit_flag = 0u32;
        for k in 0..steps {
            if x < offsets[y + 1] {
                x += 1;
            } else {
                bit_flag |= 1 << k;
                y += 1;
            }
        }
        single_row &= y == tile_start.y;
        let fields = LaneFields {
            x_offset: (start.x - tile_start.x) as u32,
            y_offset: (start.y - tile_start.y) as u32,
            bit_flag,
        };
        desc.push(pack_descriptor(fields, layout)?);
        stats.max_probes = stats.max_probes.max(probes);
        stats.max_sim_steps = stats.max_sim_steps.max(steps as u32);
        stats.lanes += 1;
    }

    let mut y = tile_start.y as u32;
    if single_row {
        y |= LONG_ROW_MARK;
    }
    Ok(TileOut {
        x: tile_start.x as u32,
        y,
        desc,
        stats,
    })
}

/// Builds the tile metadata of `a`. Tiles are generated in parallel; the
/// result is identical to a sequential construction.
pub fn generate_tile<T: Scalar>(a: &CsrMatrix<T>, c: &SimtConfig) -> Result<TileMetadata> {
    generate_tile_with_stats(a, c).map(|(t, _)| t)
}

pub fn generate_tile_with_stats<T: Scalar>(
    a: &CsrMatrix<T>,
    c: &SimtConfig,
) -> Result<(TileMetadata, GenerationStats)> {
    let (m, n) = (a.nnz(), a.n_rows());
    if n > ROW_MASK as usize {
        return Err(Error::Capacity(format!(
            "{n} rows do not fit the 31-bit row index of tile_y"
        )));
    }
    if m > u32::MAX as usize {
        return Err(Error::Capacity(format!("{m} nonzeros do not fit 32-bit tile_x")));
    }
    let layout = SimtConfig::new(c.omega(), c.sigma(), c.omega())?;
    let offsets = a.row_offsets();
    let lane_num = (m + n).div_ceil(c.sigma() as usize);
    let tile_num = (m + n).div_ceil(c.tile_span());

    let tiles = (0..tile_num)
        .into_par_iter()
        .map(|i| generate_one_tile(offsets, i, m, n, lane_num, &layout))
        .collect::<Result<Vec<_>>>()?;

    let mut tile_x = Vec::with_capacity(tile_num + 1);
    let mut tile_y = Vec::with_capacity(tile_num + 1);
    let mut lane_desc = Vec::with_capacity(lane_num);
    let mut stats = GenerationStats::default();
    for t in tiles {
        tile_x.push(t.x);
        tile_y.push(t.y);
        lane_desc.extend(t.desc);
        stats.max_probes = stats.max_probes.max(t.stats.max_probes);
        stats.max_sim_steps = stats.max_sim_steps.max(t.stats.max_sim_steps);
        stats.lanes += t.stats.lanes;
    }
    tile_x.push(m as u32);
    tile_y.push(n as u32);

    Ok((
        TileMetadata {
            layout,
            m,
            n,
            tile_x,
            tile_y,
            lane_desc,
        },
        stats,
    ))
}

/// Decodes every lane back into path steps, checking that lanes are
/// contiguous, that long-row marks agree with the decoded steps and that the
/// path ends at `(m, n)`.
pub fn reconstruct_path(t: &TileMetadata, c: &SimtConfig, m: usize, n: usize) -> Result<Vec<MergeStep>> {
    if !t.matches(c) {
        return Err(Error::ConfigMismatch(format!(
            "metadata built with omega={} sigma={}, config has omega={} sigma={}",
            t.omega(),
            t.sigma(),
            c.omega(),
            c.sigma()
        )));
    }
    if t.nnz() != m || t.n_rows() != n {
        return Err(Error::Corrupt(format!(
            "metadata describes {}x? with {} nonzeros, expected {n} rows and {m} nonzeros",
            t.n_rows(),
            t.nnz()
        )));
    }
    let omega = t.omega() as usize;
    let sigma = t.sigma() as usize;
    let used_bits = 2 * c.offset_bits() + c.sigma();
    let mut steps = Vec::with_capacity(m + n);
    let mut cur = PathCoord::default();

    for i in 0..t.tile_num() {
        let start = t.tile_start(i);
        if start != cur {
            return Err(Error::Corrupt(format!(
                "tile {i} starts at ({}, {}) but the path is at ({}, {})",
                start.x, start.y, cur.x, cur.y
            )));
        }
        let mut saw_down = false;
        for j in i * omega..((i + 1) * omega).min(t.lane_num()) {
            if (t.lane_desc()[j].word() as u64) >> used_bits != 0 {
                return Err(Error::Corrupt(format!("lane {j} has bits set above its descriptor fields")));
            }
            let f = t.lane_fields(j);
            let lane_start = PathCoord::new(start.x + f.x_offset as usize, start.y + f.y_offset as usize);
            if lane_start != cur {
                return Err(Error::Corrupt(format!(
                    "lane {j} starts at ({}, {}) but the path is at ({}, {})",
                    lane_start.x, lane_start.y, cur.x, cur.y
                )));
            }
            let len = t.lane_nnz(j);
            if len < sigma && f.bit_flag >> len != 0 {
                return Err(Error::Corrupt(format!("tail lane {j} has flag bits past step {len}")));
            }
            for k in 0..len {
                let step = if f.bit_flag >> k & 1 == 1 {
                    saw_down = true;
                    MergeStep::Down
                } else {
                    MergeStep::Right
                };
                cur = step.apply(cur);
                steps.push(step);
            }
        }
        if t.is_long_row(i) == saw_down {
            return Err(Error::Corrupt(format!(
                "tile {i} long-row mark is {} but the tile {} a down step",
                t.is_long_row(i),
                if saw_down { "has" } else { "has no" }
            )));
        }
    }

    let end = t.tile_start(t.tile_num());
    if t.is_long_row(t.tile_num()) || end != PathCoord::new(m, n) || cur != end {
        return Err(Error::Corrupt(format!(
            "decoded path ends at ({}, {}), terminal entry is ({}, {}), expected ({m}, {n})",
            cur.x, cur.y, end.x, end.y
        )));
    }
    Ok(steps)
}

/// Fraction of tiles that take the long-row fast path.
pub fn long_row_fraction(t: &TileMetadata) -> f64 {
    match t.tile_num() {
        0 => 0.0,
        tiles => t.marked_tiles() as f64 / tiles as f64,
    }
}

/// Modeled metadata traffic in bytes:
/// `8 * (ceil((m+n)/(omega*sigma)) + 1) + 4 * ceil((m+n)/sigma) * (1 - r_f)`.
pub fn metadata_footprint(m: usize, n: usize, c: &SimtConfig, r_f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r_f) {
        return Err(Error::InvalidArgument(format!("r_f = {r_f} outside [0, 1]")));
    }
    let tiles = (m + n).div_ceil(c.tile_span());
    let lanes = (m + n).div_ceil(c.sigma() as usize);
    Ok(8.0 * (tiles + 1) as f64 + 4.0 * lanes as f64 * (1.0 - r_f))
}
