use crate::scalar::Scalar;

use super::{Deposit, LaneCarry};

/// Warp-level segmented reduction over the lanes' trailing carries.
///
/// Runs the shuffle-up scan: while any lane is unflagged, each unflagged
/// lane absorbs the running sum of the lane `offset` below it and inherits
/// its flag; `offset` doubles every round. Afterwards every lane whose own
/// flag is set adds the scanned sum of its predecessor (lane 0 reads lane
/// `omega - 1`) into that predecessor's row.
///
/// `carries[0].flag` must be set.
pub fn warp_segmented_sum<T: Scalar, D: Deposit<T> + ?Sized>(carries: &[LaneCarry<T>], partials: &mut D) {
    segmented_sum_with(carries, &mut ScanWork::default(), partials);
}

/// Reusable per-warp scan registers.
#[derive(Debug, Default)]
pub(crate) struct ScanWork<T> {
    sum: Vec<T>,
    flag: Vec<bool>,
    prev_sum: Vec<T>,
    prev_flag: Vec<bool>,
}

pub(crate) fn segmented_sum_with<T: Scalar, D: Deposit<T> + ?Sized>(
    carries: &[LaneCarry<T>],
    work: &mut ScanWork<T>,
    partials: &mut D,
) {
    let omega = carries.len();
    if omega == 0 {
        return;
    }
    debug_assert!(carries[0].flag, "lane 0 must be flagged");
    work.sum.clear();
    work.sum.extend(carries.iter().map(|c| c.sum));
    work.flag.clear();
    work.flag.extend(carries.iter().map(|c| c.flag));
    let mut offset = 1;
    while offset < omega && work.flag.iter().any(|f| !f) {
        // Shuffles read the values of the previous round.
        work.prev_sum.clone_from(&work.sum);
        work.prev_flag.clone_from(&work.flag);
        for lid in offset..omega {
            if !work.prev_flag[lid] {
                work.sum[lid] += work.prev_sum[lid - offset];
                work.flag[lid] = work.prev_flag[lid - offset];
            }
        }
        offset <<= 1;
    }
    for lid in 0..omega {
        if carries[lid].flag {
            let src = if lid == 0 { omega - 1 } else { lid - 1 };
            partials.add(carries[src].y_offset, work.sum[src]);
        }
    }
}
