//! Raw matrix formulas behind the joint objective and its fixed-point updates.
//!
//! Shapes: `px` has length `n`, `ks` is `m x n`, `k1` is `n x n`, `k2` is `m x m`.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::info::{expected_kl_raw, mutual_information_raw};
use crate::scalar::{log_sum_exp, xlogx_over_y, Scalar};

/// Objective value with every term computed from the kernels themselves.
pub(crate) fn objective_raw<T: Scalar>(px: &[T], ks: &Mat<T>, k1: &Mat<T>, k2: &Mat<T>, b1: T, b2: T) -> T {
    let ks_k1 = ks.matmul(k1);
    let k = k2.matmul(&ks_k1);
    let pyt = ks_k1.matvec(px);
    let mut v = expected_kl_raw(px, ks, &k);
    if b1 > T::zero() {
        v = v + b1 * mutual_information_raw(px, k1);
    }
    if b2 > T::zero() {
        v = v + b2 * mutual_information_raw(&pyt, k2);
    }
    v
}

/// `A(xt, x) = sum_y ks(y|x) (k2 ks)(y|xt) / k(y|x)`.
pub(crate) fn a_matrix<T: Scalar>(ks: &Mat<T>, k2ks: &Mat<T>, k: &Mat<T>) -> Result<Mat<T>> {
    let (m, n) = (ks.rows(), ks.cols());
    let mut ratio = Mat::zeros(m, n);
    for x in 0..n {
        for y in 0..m {
            let s = ks[(y, x)];
            if s > T::zero() {
                let d = k[(y, x)];
                if d <= T::zero() {
                    return Err(Error::Positivity(format!("effective kernel vanishes at ({y}, {x})")));
                }
                ratio[(y, x)] = s / d;
            }
        }
    }
    // A(xt, x) = sum_y k2ks(y, xt) * ratio(y, x)
    Ok(Mat::from_fn(n, n, |xt, x| {
        k2ks.col(xt).iter().zip(ratio.col(x)).map(|(&a, &b)| a * b).sum()
    }))
}

/// `D(yt) = sum_y k2(y|yt) ln(k2(y|yt) / hy(y))`, per input column of `k2`.
pub(crate) fn d_vector<T: Scalar>(k2: &Mat<T>, hy: &[T]) -> Vec<T> {
    (0..k2.cols())
        .map(|c| k2.col(c).iter().zip(hy).map(|(&a, &b)| xlogx_over_y(a, b)).sum())
        .collect()
}

/// `C(xt) = sum_yt ks(yt|xt) D(yt)`.
pub(crate) fn c_vector<T: Scalar>(ks: &Mat<T>, k2: &Mat<T>, hy: &[T]) -> Vec<T> {
    let d = d_vector(k2, hy);
    (0..ks.cols())
        .map(|xt| ks.col(xt).iter().zip(&d).map(|(&a, &b)| a * b).sum())
        .collect()
}

/// `B(y, yt) = sum_x px(x) ks(y|x) (ks k1)(yt|x) / kmix(y|x)`.
pub(crate) fn b_matrix<T: Scalar>(px: &[T], ks: &Mat<T>, ks_k1: &Mat<T>, kmix: &Mat<T>) -> Result<Mat<T>> {
    let (m, n) = (ks.rows(), ks.cols());
    let mut b = Mat::zeros(m, m);
    for x in 0..n {
        if px[x] <= T::zero() {
            continue;
        }
        for y in 0..m {
            let s = ks[(y, x)];
            if s <= T::zero() {
                continue;
            }
            let d = kmix[(y, x)];
            if d <= T::zero() {
                return Err(Error::Positivity(format!("effective kernel vanishes at ({y}, {x})")));
            }
            let w = px[x] * s / d;
            for yt in 0..m {
                b[(y, yt)] = b[(y, yt)] + w * ks_k1[(yt, x)];
            }
        }
    }
    Ok(b)
}

/// Unnormalized log-weights of the K1 proposal.
pub(crate) fn k1_log_weights<T: Scalar>(hx: &[T], a: &Mat<T>, c: &[T], b1: T, b2: T) -> Mat<T> {
    let r = b2 / b1;
    Mat::from_fn(a.rows(), a.cols(), |xt, x| hx[xt].ln() + a[(xt, x)] / b1 - r * c[xt])
}

/// Unnormalized log-weights of the K2 proposal.
pub(crate) fn k2_log_weights<T: Scalar>(hy: &[T], b: &Mat<T>, pyt: &[T], b2: T) -> Result<Mat<T>> {
    if let Some(index) = pyt.iter().position(|&p| p <= T::zero()) {
        return Err(Error::DegenerateMarginal { index });
    }
    Ok(Mat::from_fn(b.rows(), b.cols(), |y, yt| hy[y].ln() + b[(y, yt)] / (b2 * pyt[yt])))
}

/// Gradient of the objective with respect to `k1` (constant-per-column parts dropped).
pub(crate) fn k1_gradient<T: Scalar>(px: &[T], ks: &Mat<T>, k1: &Mat<T>, k2: &Mat<T>, b1: T, b2: T) -> Result<Mat<T>> {
    let hx = k1.matvec(px);
    let k2ks = k2.matmul(ks);
    let k = k2ks.matmul(k1);
    let hy = k.matvec(px);
    let a = a_matrix(ks, &k2ks, &k)?;
    let c = c_vector(ks, k2, &hy);
    Ok(Mat::from_fn(k1.rows(), k1.cols(), |xt, x| {
        let mut g = -a[(xt, x)];
        if b1 > T::zero() {
            g = g + b1 * log_ratio(k1[(xt, x)], hx[xt]);
        }
        if b2 > T::zero() {
            g = g + b2 * c[xt];
        }
        px[x] * g
    }))
}

/// Gradient of the objective with respect to `k2` (constant-per-column parts dropped).
pub(crate) fn k2_gradient<T: Scalar>(px: &[T], ks: &Mat<T>, k1: &Mat<T>, k2: &Mat<T>, b2: T) -> Result<Mat<T>> {
    let ks_k1 = ks.matmul(k1);
    let k = k2.matmul(&ks_k1);
    let pyt = ks_k1.matvec(px);
    let hy = k2.matvec(&pyt);
    let b = b_matrix(px, ks, &ks_k1, &k)?;
    Ok(Mat::from_fn(k2.rows(), k2.cols(), |y, yt| {
        -b[(y, yt)] + b2 * pyt[yt] * log_ratio(k2[(y, yt)], hy[y])
    }))
}

#[inline]
fn log_ratio<T: Scalar>(a: T, b: T) -> T {
    if a <= T::zero() {
        T::zero()
    } else {
        (a / b).ln()
    }
}

/// Normalizes every column of a log-weight matrix to log-probabilities.
pub(crate) fn log_normalize_cols<T: Scalar>(l: &mut Mat<T>) {
    for c in 0..l.cols() {
        let col = l.col_mut(c);
        let z = log_sum_exp(col);
        col.iter_mut().for_each(|v| *v = *v - z);
    }
}

/// `exp` of log-probabilities, floored at the smallest positive normal so
/// iterates stay strictly positive.
pub(crate) fn exp_floored<T: Scalar>(l: &Mat<T>) -> Mat<T> {
    let tiny = T::min_positive_value();
    Mat::from_fn(l.rows(), l.cols(), |r, c| l[(r, c)].exp().max(tiny))
}

/// Column-normalized kernel from unnormalized log-weights.
pub(crate) fn kernel_from_log_weights<T: Scalar>(mut l: Mat<T>) -> Result<Mat<T>> {
    if l.as_slice().iter().any(|v| v.is_nan() || *v == T::infinity()) {
        return Err(Error::Numerical { iter: 0, what: "non-finite exponent in kernel update".into() });
    }
    log_normalize_cols(&mut l);
    Ok(exp_floored(&l))
}

/// Entrywise `ln`, mapping zeros to the log of the smallest positive normal.
pub(crate) fn ln_floored<T: Scalar>(k: &Mat<T>) -> Mat<T> {
    let tiny = T::min_positive_value();
    Mat::from_fn(k.rows(), k.cols(), |r, c| k[(r, c)].max(tiny).ln())
}

/// Largest entrywise gap between a kernel and its proposal under
/// self-consistent marginals.
pub(crate) fn residual_blocks<T: Scalar>(
    px: &[T],
    ks: &Mat<T>,
    k1: &Mat<T>,
    k2: &Mat<T>,
    b1: T,
    b2: T,
) -> Result<(Option<T>, Option<T>)> {
    let hx = k1.matvec(px);
    let ks_k1 = ks.matmul(k1);
    let pyt = ks_k1.matvec(px);
    let hy = k2.matvec(&pyt);
    let k2ks = k2.matmul(ks);
    let k = k2.matmul(&ks_k1);
    let r1 = if b1 > T::zero() {
        let a = a_matrix(ks, &k2ks, &k)?;
        let c = if b2 > T::zero() { c_vector(ks, k2, &hy) } else { vec![T::zero(); hx.len()] };
        let rhs = kernel_from_log_weights(k1_log_weights(&hx, &a, &c, b1, b2))?;
        Some(rhs.max_abs_diff(k1))
    } else {
        None
    };
    let r2 = if b2 > T::zero() {
        let b = b_matrix(px, ks, &ks_k1, &k)?;
        let rhs = kernel_from_log_weights(k2_log_weights(&hy, &b, &pyt, b2)?)?;
        Some(rhs.max_abs_diff(k2))
    } else {
        None
    };
    Ok((r1, r2))
}
