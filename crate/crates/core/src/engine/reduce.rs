//! Removal of zero-mass symbols before iterating, and re-embedding afterwards.

use crate::matrix::Mat;
use crate::scalar::Scalar;

pub(crate) struct Reduced<T> {
    pub x_keep: Vec<usize>,
    pub y_keep: Vec<usize>,
    pub px: Vec<T>,
    pub ks: Mat<T>,
}

impl<T: Scalar> Reduced<T> {
    /// Keeps inputs with positive mass and outputs reachable from them.
    pub fn by_support(px: &[T], ks: &Mat<T>) -> Self {
        let x_keep: Vec<usize> = (0..px.len()).filter(|&x| px[x] > T::zero()).collect();
        let y_keep: Vec<usize> = (0..ks.rows())
            .filter(|&y| x_keep.iter().any(|&x| ks[(y, x)] > T::zero()))
            .collect();
        Self::select(px, ks, x_keep, y_keep)
    }

    /// Keeps every input and drops only outputs the model never produces.
    pub fn by_zero_rows(px: &[T], ks: &Mat<T>) -> Self {
        let x_keep: Vec<usize> = (0..px.len()).collect();
        let y_keep: Vec<usize> = (0..ks.rows())
            .filter(|&y| (0..ks.cols()).any(|x| ks[(y, x)] > T::zero()))
            .collect();
        Self::select(px, ks, x_keep, y_keep)
    }

    fn select(px: &[T], ks: &Mat<T>, x_keep: Vec<usize>, y_keep: Vec<usize>) -> Self {
        let rpx = x_keep.iter().map(|&x| px[x]).collect();
        let rks = Mat::from_fn(y_keep.len(), x_keep.len(), |r, c| ks[(y_keep[r], x_keep[c])]);
        Reduced { x_keep, y_keep, px: rpx, ks: rks }
    }
}

/// Square kernel on `full` symbols: `block` on the kept ones, identity elsewhere.
pub(crate) fn embed<T: Scalar>(block: &Mat<T>, keep: &[usize], full: usize) -> Mat<T> {
    let mut out = Mat::identity(full);
    for &c in keep {
        for r in 0..full {
            out[(r, c)] = T::zero();
        }
    }
    for (j, &c) in keep.iter().enumerate() {
        for (i, &r) in keep.iter().enumerate() {
            out[(r, c)] = block[(i, j)];
        }
    }
    out
}
