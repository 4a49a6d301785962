use crate::scalar::Scalar;

/// Two output vectors that swap roles every SpMV: one receives `A x`, the
/// other is zeroed during the same commit so it is ready for the next call.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBuffer<T> {
    bufs: [Vec<T>; 2],
    parity: usize,
}

impl<T: Scalar> DualBuffer<T> {
    pub fn new(len: usize) -> Self {
        Self {
            bufs: [vec![T::zero(); len], vec![T::zero(); len]],
            parity: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.bufs[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.bufs[0].is_empty()
    }

    /// Index of the buffer the next SpMV writes.
    pub fn parity(&self) -> usize {
        self.parity
    }

    /// Result of the most recent SpMV.
    pub fn output(&self) -> &[T] {
        &self.bufs[self.parity ^ 1]
    }

    /// The buffer the next SpMV will write; all zeros between calls.
    pub fn next_output(&self) -> &[T] {
        &self.bufs[self.parity]
    }

    pub(crate) fn split_mut(&mut self) -> (&mut [T], &mut [T]) {
        let [a, b] = &mut self.bufs;
        if self.parity == 0 {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub(crate) fn flip(&mut self) {
        self.parity ^= 1;
    }
}
