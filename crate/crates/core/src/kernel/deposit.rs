//! Write sites into a block's row-partial scratch.
//!
//! `add` marks places where a parallel backend needs an atomic add (rows that
//! more than one lane or tile can touch); `store` marks rows owned by a single
//! lane. Under sequential in-block execution both are plain memory writes.

use crate::scalar::Scalar;

pub trait Deposit<T> {
    fn add(&mut self, idx: usize, v: T);
    fn store(&mut self, idx: usize, v: T);
}

impl<T: Scalar> Deposit<T> for [T] {
    #[inline]
    fn add(&mut self, idx: usize, v: T) {
        self[idx] += v;
    }

    #[inline]
    fn store(&mut self, idx: usize, v: T) {
        self[idx] = v;
    }
}

impl<T: Scalar> Deposit<T> for Vec<T> {
    #[inline]
    fn add(&mut self, idx: usize, v: T) {
        self[idx] += v;
    }

    #[inline]
    fn store(&mut self, idx: usize, v: T) {
        self[idx] = v;
    }
}

/// Row partials that also log every deposit as `(global row, value)`.
pub struct Traced<'a, T> {
    pub(crate) partials: &'a mut [T],
    pub(crate) base_row: usize,
    pub(crate) log: &'a mut Vec<(usize, T)>,
}

impl<T: Scalar> Deposit<T> for Traced<'_, T> {
    fn add(&mut self, idx: usize, v: T) {
        self.partials[idx] += v;
        self.log.push((self.base_row + idx, v));
    }

    fn store(&mut self, idx: usize, v: T) {
        self.partials[idx] = v;
        self.log.push((self.base_row + idx, v));
    }
}

/// A view of another sink shifted by `offset` positions.
pub struct Shifted<'a, D: ?Sized> {
    pub(crate) inner: &'a mut D,
    pub(crate) offset: usize,
}

impl<T, D: Deposit<T> + ?Sized> Deposit<T> for Shifted<'_, D> {
    #[inline]
    fn add(&mut self, idx: usize, v: T) {
        self.inner.add(self.offset + idx, v);
    }

    #[inline]
    fn store(&mut self, idx: usize, v: T) {
        self.inner.store(self.offset + idx, v);
    }
}
