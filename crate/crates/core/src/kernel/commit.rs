use crate::scalar::Scalar;

use super::BlockRange;

/// A block's contributions to rows it may share with neighbouring blocks:
/// its first row and, when different, its trailing row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCarry<T> {
    pub head: (usize, T),
    pub tail: Option<(usize, T)>,
}

/// Commits one block's row partials.
///
/// `partials` holds rows `y_bs..=y_be` of the block. Interior rows are
/// stored into `active_interior` and the same rows of `inactive_interior`
/// are zeroed; the first and trailing rows are returned for the ordered
/// cross-block reduction.
pub fn commit_block<T: Scalar>(
    partials: &[T],
    r: &BlockRange,
    n_rows: usize,
    active_interior: &mut [T],
    inactive_interior: &mut [T],
) -> BoundaryCarry<T> {
    let interior = r.interior();
    debug_assert_eq!(active_interior.len(), interior.len());
    active_interior.copy_from_slice(&partials[1..1 + interior.len()]);
    inactive_interior.fill(T::zero());
    let tail = if r.y_be > r.y_bs && r.y_be < n_rows {
        Some((r.y_be, partials[r.y_be - r.y_bs]))
    } else {
        debug_assert!(
            r.y_be == r.y_bs || partials[r.y_be - r.y_bs] == T::zero(),
            "nonzero carry past the last row"
        );
        None
    };
    BoundaryCarry {
        head: (r.y_bs, partials[0]),
        tail,
    }
}

/// Adds block boundary carries into `active` in ascending block order and
/// zeroes the same rows of `inactive`. `active` must be zero at those rows.
pub fn reduce_boundary_carries<T: Scalar>(carries: &[BoundaryCarry<T>], active: &mut [T], inactive: &mut [T]) {
    for c in carries {
        for (row, v) in std::iter::once(c.head).chain(c.tail) {
            active[row] += v;
            inactive[row] = T::zero();
        }
    }
}
