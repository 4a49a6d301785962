use crate::format::LaneFields;
use crate::scalar::Scalar;

use super::Deposit;

/// What a lane hands to the warp segmented reduction: its trailing partial
/// sum, the (tile-relative) row that sum belongs to, and whether the lane
/// closes a row segment (lane 0 always does).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneCarry<T> {
    pub sum: T,
    pub y_offset: usize,
    pub flag: bool,
}

impl<T: Scalar> LaneCarry<T> {
    /// Carry of a lane past the end of the path in the final tile.
    pub fn inactive(y_offset: usize) -> Self {
        Self {
            sum: T::zero(),
            y_offset,
            flag: true,
        }
    }
}

/// Scans one lane's steps against the tile's staged products.
///
/// A Right step adds `staged[x_offset]` to the running sum. A Down step
/// finalizes row `y_offset`: the lane's first Down adds into the row because
/// earlier lanes may have contributed to it, later Downs store directly.
pub fn tile_normal_tackle<T: Scalar, D: Deposit<T> + ?Sized>(
    staged: &[T],
    fields: LaneFields,
    lane_nnz: usize,
    lane_id: usize,
    partials: &mut D,
) -> LaneCarry<T> {
    let mut x_offset = fields.x_offset as usize;
    let mut y_offset = fields.y_offset as usize;
    let mut first = true;
    let mut sum = T::zero();
    let mut lane_flag = lane_id == 0;
    for k in 0..lane_nnz {
        if fields.bit_flag >> k & 1 == 1 {
            if first {
                partials.add(y_offset, sum);
                first = false;
            } else {
                partials.store(y_offset, sum);
            }
            sum = T::zero();
            y_offset += 1;
            lane_flag = true;
        } else {
            sum += staged[x_offset];
            x_offset += 1;
        }
    }
    LaneCarry {
        sum,
        y_offset,
        flag: lane_flag,
    }
}
