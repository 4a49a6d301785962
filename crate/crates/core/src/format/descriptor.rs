use crate::error::{Error, Result};

use super::SimtConfig;

/// 32-bit lane descriptor: `x_offset` in the low `offset_bits` bits,
/// `y_offset` in the next `offset_bits`, and the step flags above them
/// (bit `k` set means step `k` of the lane is Down).
///
/// For `omega = 32, sigma = 14` the layout is bits 8..0 `x_offset`,
/// 17..9 `y_offset`, 31..18 `bit_flag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(transparent)]
pub struct LaneDescriptor(pub u32);

impl LaneDescriptor {
    pub fn word(self) -> u32 {
        self.0
    }
}

/// Unpacked descriptor contents. The number of valid steps in a lane is not
/// stored; it follows from the lane index (see [`super::lane_nnz`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LaneFields {
    pub x_offset: u32,
    pub y_offset: u32,
    pub bit_flag: u32,
}

pub fn pack_descriptor(f: LaneFields, c: &SimtConfig) -> Result<LaneDescriptor> {
    let bits = c.offset_bits();
    let span = c.tile_span() as u64;
    if f.x_offset as u64 >= span {
        return Err(Error::FieldOverflow {
            field: "x_offset",
            value: f.x_offset as u64,
            bits,
        });
    }
    if f.y_offset as u64 >= span {
        return Err(Error::FieldOverflow {
            field: "y_offset",
            value: f.y_offset as u64,
            bits,
        });
    }
    if (f.bit_flag as u64) >> c.sigma() != 0 {
        return Err(Error::FieldOverflow {
            field: "bit_flag",
            value: f.bit_flag as u64,
            bits: c.sigma(),
        });
    }
    let word = ((f.bit_flag as u64) << (2 * bits)) | ((f.y_offset as u64) << bits) | f.x_offset as u64;
    Ok(LaneDescriptor(word as u32))
}

pub fn unpack_descriptor(d: LaneDescriptor, c: &SimtConfig) -> LaneFields {
    let bits = c.offset_bits();
    let word = d.0 as u64;
    let offset_mask = (1u64 << bits) - 1;
    LaneFields {
        x_offset: (word & offset_mask) as u32,
        y_offset: ((word >> bits) & offset_mask) as u32,
        bit_flag: ((word >> (2 * bits)) & ((1u64 << c.sigma()) - 1)) as u32,
    }
}
