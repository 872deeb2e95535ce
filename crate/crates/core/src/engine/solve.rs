use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::safeguard::{guarded_step, Slack};
use super::terms::*;
use super::Init;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Which kernel, if any, is held at the identity during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pin {
    Free,
    K1Identity,
    K2Identity,
}

pub(crate) struct RawRun<T> {
    pub k1: Mat<T>,
    pub k2: Mat<T>,
    pub objective_trace: Vec<T>,
    pub delta_trace: Vec<T>,
    pub converged: bool,
}

pub(crate) struct Controls<T> {
    pub b1: T,
    pub b2: T,
    pub max_iters: usize,
    pub tol: T,
    pub pin: Pin,
}

/// Strictly positive column-stochastic matrix with entries `0.1 + U[0, 1)` before normalization.
pub(crate) fn random_kernel<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat<T> {
    let mut k = Mat::from_fn(rows, cols, |_, _| T::lit(0.1 + rng.random::<f64>()));
    for c in 0..cols {
        let col = k.col_mut(c);
        let s: T = col.iter().copied().sum();
        col.iter_mut().for_each(|v| *v = *v / s);
    }
    k
}

pub(crate) fn uniform_kernel<T: Scalar>(rows: usize, cols: usize) -> Mat<T> {
    let p = T::one() / T::lit(rows as f64);
    Mat::from_fn(rows, cols, |_, _| p)
}

/// Seed for restart `i` derived from a base seed; restart 0 keeps the base.
pub(crate) fn derived_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub(crate) fn initial_kernels<T: Scalar>(init: Init, n: usize, m: usize, pin: Pin) -> (Mat<T>, Mat<T>) {
    let (k1, k2) = match init {
        Init::Uniform => (uniform_kernel(n, n), uniform_kernel(m, m)),
        Init::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k1 = random_kernel(&mut rng, n, n);
            let k2 = random_kernel(&mut rng, m, m);
            (k1, k2)
        }
    };
    match pin {
        Pin::Free => (k1, k2),
        Pin::K1Identity => (Mat::identity(n), k2),
        Pin::K2Identity => (k1, Mat::identity(m)),
    }
}

/// Alternating safeguarded updates; `px` and `ks` are already free of zero-mass symbols.
pub(crate) fn run<T: Scalar>(px: &[T], ks: &Mat<T>, mut k1: Mat<T>, mut k2: Mat<T>, ctl: &Controls<T>) -> Result<RawRun<T>> {
    let (n, m) = (ks.cols(), ks.rows());
    let (b1, b2) = match ctl.pin {
        Pin::Free => (ctl.b1, ctl.b2),
        Pin::K1Identity => (T::zero(), ctl.b2),
        Pin::K2Identity => (ctl.b1, T::zero()),
    };
    let f = |a: &Mat<T>, b: &Mat<T>| objective_raw(px, ks, a, b, b1, b2);

    // initial marginals: uniform on the laundered alphabets unless a kernel is pinned
    let mut hx = match ctl.pin {
        Pin::K1Identity => px.to_vec(),
        _ => vec![T::one() / T::lit(n as f64); n],
    };
    let mut pyt = ks.matvec(&hx);
    let mut hy = match ctl.pin {
        Pin::K2Identity => pyt.clone(),
        _ => vec![T::one() / T::lit(m as f64); m],
    };

    let mut cur = f(&k1, &k2);
    if !cur.is_finite() {
        return Err(Error::Numerical { iter: 0, what: format!("initial objective is {cur}") });
    }
    let mut objective_trace = vec![cur];
    let mut delta_trace = Vec::new();
    let mut converged = false;
    let norm = T::lit((n + m) as f64);

    for iter in 1..=ctl.max_iters {
        let numerical = |e: Error| match e {
            Error::Numerical { what, .. } => Error::Numerical { iter, what },
            other => other,
        };
        let k1_new = if ctl.pin == Pin::K1Identity {
            k1.clone()
        } else {
            let k2ks = k2.matmul(ks);
            let k = k2ks.matmul(&k1);
            let a = a_matrix(ks, &k2ks, &k)?;
            let c = if b2 > T::zero() { c_vector(ks, &k2, &hy) } else { vec![T::zero(); n] };
            let mut prop = k1_log_weights(&hx, &a, &c, b1, b2);
            check_finite(&prop, iter)?;
            log_normalize_cols(&mut prop);
            let g = k1_gradient(px, ks, &k1, &k2, b1, b2)?;
            let step = guarded_step(&k1, &prop, cur, &g, Slack::Strict, |cand| f(cand, &k2));
            cur = step.value;
            step.kernel
        };

        let k2_new = if ctl.pin == Pin::K2Identity {
            k2.clone()
        } else {
            let ks_k1 = ks.matmul(&k1_new);
            let kmix = k2.matmul(&ks_k1);
            let b = b_matrix(px, ks, &ks_k1, &kmix)?;
            let mut prop = k2_log_weights(&hy, &b, &pyt, b2).map_err(numerical)?;
            check_finite(&prop, iter)?;
            log_normalize_cols(&mut prop);
            let g = k2_gradient(px, ks, &k1_new, &k2, b2)?;
            let step = guarded_step(&k2, &prop, cur, &g, Slack::Strict, |cand| f(&k1_new, cand));
            cur = step.value;
            step.kernel
        };

        if !cur.is_finite() {
            return Err(Error::Numerical { iter, what: format!("objective became {cur}") });
        }
        let delta = (k1_new.l1_distance(&k1) + k2_new.l1_distance(&k2)) / norm;
        k1 = k1_new;
        k2 = k2_new;
        hx = k1.matvec(px);
        pyt = ks.matvec(&hx);
        hy = k2.matvec(&pyt);
        objective_trace.push(cur);
        delta_trace.push(delta);
        if delta < ctl.tol {
            converged = true;
            break;
        }
    }
    Ok(RawRun { k1, k2, objective_trace, delta_trace, converged })
}

fn check_finite<T: Scalar>(l: &Mat<T>, iter: usize) -> Result<()> {
    if l.as_slice().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numerical { iter, what: "non-finite exponent in kernel update".into() })
    }
}
