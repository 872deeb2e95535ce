//! Small dense column-major matrix used for kernel arithmetic.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Dense `rows x cols` matrix stored column by column.
///
/// Columns are contiguous because every kernel column is a conditional
/// distribution and most operations walk one column at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    /// Builds from row-major nested vectors (`rows[r][c]`). Returns `None` when ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nc) {
            return None;
        }
        Some(Self::from_fn(nr, nc, |r, c| rows[r][c]))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)]).collect()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, c: usize) -> &[T] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [T] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let rc = rhs.col(j);
            let oc = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &w) in rc.iter().enumerate() {
                if w == T::zero() {
                    continue;
                }
                for (o, &a) in oc.iter_mut().zip(self.col(k)) {
                    *o = *o + a * w;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![T::zero(); self.rows];
        for (c, &w) in v.iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(c)) {
                *o = *o + a * w;
            }
        }
        out
    }

    /// Entrywise sum of absolute differences.
    pub fn l1_distance(&self, other: &Mat<T>) -> T {
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).abs()).sum()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Mat<T>) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[c * self.rows + r]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[c * self.rows + r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_matches_hand_product() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Mat::from_rows(&[vec![0.5, 0.0], vec![0.5, 1.0]]).unwrap();
        let c = a.matmul(&b);
        assert_eq!(c.to_rows(), vec![vec![1.5, 2.0], vec![3.5, 4.0]]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Mat::<f64>::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_none());
    }
}
