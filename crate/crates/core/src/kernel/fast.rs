use crate::scalar::Scalar;

use super::Deposit;

/// Long-row fast path: the whole tile lies in one row, so the warp reduces
/// its products directly and adds the tile total into `row`.
///
/// Lane `j` subtotals positions `j, j + omega, ...` in index order; the lane
/// subtotals are then combined by a fixed halving tree. Returns the tile
/// total.
pub fn tile_fast_tackle<T: Scalar, D: Deposit<T> + ?Sized>(
    values: &[T],
    cols: &[usize],
    x: &[T],
    omega: usize,
    partials: &mut D,
    row: usize,
) -> T {
    let mut lanes = Vec::with_capacity(omega);
    fast_tackle_with(values, cols, x, omega, &mut lanes, partials, row)
}

pub(crate) fn fast_tackle_with<T: Scalar, D: Deposit<T> + ?Sized>(
    values: &[T],
    cols: &[usize],
    x: &[T],
    omega: usize,
    lanes: &mut Vec<T>,
    partials: &mut D,
    row: usize,
) -> T {
    lanes.clear();
    lanes.extend((0..omega).map(|lane| {
        let mut sub = T::zero();
        for k in (lane..values.len()).step_by(omega) {
            sub += values[k] * x[cols[k]];
        }
        sub
    }));
    let total = tree_reduce(lanes);
    partials.add(row, total);
    total
}

/// Halving tree over lane registers: at stride `s`, lane `l < s` adds lane
/// `l + s` when it exists.
pub(crate) fn tree_reduce<T: Scalar>(lanes: &mut [T]) -> T {
    let n = lanes.len();
    if n == 0 {
        return T::zero();
    }
    let mut stride = n.next_power_of_two() / 2;
    while stride >= 1 {
        for l in 0..stride {
            if l + stride < n {
                let v = lanes[l + stride];
                lanes[l] += v;
            }
        }
        stride /= 2;
    }
    lanes[0]
}
