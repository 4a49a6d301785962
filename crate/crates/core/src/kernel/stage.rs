use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Stages the products `values[k] * x[cols[k]]` of one tile into `dest`.
///
/// Lane `j` of the warp writes positions `k = j, j + omega, j + 2*omega, ...`;
/// every position is written exactly once, so the result does not depend on
/// lane order.
pub fn load_smem<T: Scalar>(values: &[T], cols: &[usize], x: &[T], omega: usize, dest: &mut [T]) -> Result<()> {
    debug_assert_eq!(values.len(), cols.len());
    if dest.len() < values.len() {
        return Err(Error::Capacity(format!(
            "staging {} products into {} slots",
            values.len(),
            dest.len()
        )));
    }
    if let Some(&c) = cols.iter().find(|&&c| c >= x.len()) {
        return Err(Error::InvalidMatrix(format!(
            "column index {c} outside input vector of length {}",
            x.len()
        )));
    }
    stage_products(values, cols, x, omega, dest);
    Ok(())
}

/// [`load_smem`] without bounds validation, for callers that already hold
/// a validated matrix.
#[inline]
pub(crate) fn stage_products<T: Scalar>(values: &[T], cols: &[usize], x: &[T], omega: usize, dest: &mut [T]) {
    for lane in 0..omega.min(values.len()) {
        for k in (lane..values.len()).step_by(omega) {
            dest[k] = values[k] * x[cols[k]];
        }
    }
}
