//! Binary tile cache.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic      [u8; 4]  "MBTL"
//! version    u32
//! omega      u32
//! sigma      u32
//! precision  u32      0 = f32, 1 = f64
//! m          u64      nonzeros
//! n          u64      rows
//! tile_x     [u32; tile_num + 1]
//! tile_y     [u32; tile_num + 1]   MSB = long-row mark
//! lane_desc  [u32; lane_num]
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::scalar::Precision;

use super::{LaneDescriptor, TileMetadata};

pub const TILE_CACHE_MAGIC: [u8; 4] = *b"MBTL";
pub const TILE_CACHE_VERSION: u32 = 1;

pub fn write_tile_cache<W: Write>(mut w: W, t: &TileMetadata, precision: Precision) -> Result<()> {
    w.write_all(&TILE_CACHE_MAGIC)?;
    for v in [TILE_CACHE_VERSION, t.omega(), t.sigma(), precision.tag()] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&(t.nnz() as u64).to_le_bytes())?;
    w.write_all(&(t.n_rows() as u64).to_le_bytes())?;
    let words = t
        .tile_x()
        .iter()
        .chain(t.tile_y())
        .copied()
        .chain(t.lane_desc().iter().map(|d| d.word()));
    let mut buf = Vec::with_capacity(t.allocated_bytes());
    for word in words {
        buf.extend_from_slice(&word.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_words<R: Read>(r: &mut R, len: usize) -> Result<Vec<u32>> {
    let mut bytes = vec![0u8; len * 4];
    r.read_exact(&mut bytes).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Corrupt("tile cache is truncated".into()),
        _ => e.into(),
    })?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

/// Reads a cache written by [`write_tile_cache`]. Only the header and array
/// lengths are checked here; use `reconstruct_path` to validate contents.
pub fn read_tile_cache<R: Read>(mut r: R) -> Result<(TileMetadata, Precision)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != TILE_CACHE_MAGIC {
        return Err(Error::Corrupt("bad tile cache magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != TILE_CACHE_VERSION {
        return Err(Error::Unsupported(format!("tile cache version {version}")));
    }
    let omega = read_u32(&mut r)?;
    let sigma = read_u32(&mut r)?;
    let tag = read_u32(&mut r)?;
    let precision =
        Precision::from_tag(tag).ok_or_else(|| Error::Corrupt(format!("unknown precision tag {tag}")))?;
    let m = read_u64(&mut r)? as usize;
    let n = read_u64(&mut r)? as usize;

    let probe = super::SimtConfig::new(omega, sigma, omega).map_err(|e| Error::Corrupt(e.to_string()))?;
    let tile_num = (m + n).div_ceil(probe.tile_span());
    let lane_num = (m + n).div_ceil(sigma as usize);
    let tile_x = read_words(&mut r, tile_num + 1)?;
    let tile_y = read_words(&mut r, tile_num + 1)?;
    let lane_desc = read_words(&mut r, lane_num)?.into_iter().map(LaneDescriptor).collect();
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Corrupt("trailing bytes after tile cache".into()));
    }
    let t = TileMetadata::from_raw(omega, sigma, m, n, tile_x, tile_y, lane_desc)?;
    Ok((t, precision))
}
