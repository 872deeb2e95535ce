use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SolverControls, SolverRun};
use crate::engine::terms::*;
use crate::engine::{check_model, embed, guarded_step, random_kernel, square, uniform_kernel, Init, Reduced, Slack};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::info::{expected_kl_raw, mutual_information_raw};
use crate::prob::{Distribution, Kernel};
use crate::scalar::Scalar;

fn check<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>, beta: f64, ctl: &SolverControls) -> Result<()> {
    check_model(px, kstar)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::config(format!("the iterative solver needs a positive weight, got {beta}")));
    }
    if ctl.max_iters == 0 || !(ctl.tol > 0.0) {
        return Err(Error::config("max_iters must be positive and tol > 0"));
    }
    Ok(())
}

fn start<T: Scalar>(init: Init, n: usize) -> Mat<T> {
    match init {
        Init::Uniform => uniform_kernel(n, n),
        Init::Random { seed } => random_kernel(&mut ChaCha8Rng::seed_from_u64(seed), n, n),
    }
}

/// Output-only laundering of an arbitrary (possibly stochastic) model.
///
/// Each step re-weights the current output marginal by the averaged likelihood
/// ratio of the authentic and the laundered model, then refreshes the marginal.
pub fn oil_y_general<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta2: f64,
    ctl: &SolverControls,
) -> Result<SolverRun<T>> {
    check(px, kstar, beta2, ctl)?;
    let red = Reduced::by_support(px.probs(), kstar.matrix());
    let (p, ks) = (&red.px, &red.ks);
    let m = ks.rows();
    let b2 = T::lit(beta2);
    let pyt = ks.matvec(p);
    let f = |k2: &Mat<T>| expected_kl_raw(p, ks, &k2.matmul(ks)) + b2 * mutual_information_raw(&pyt, k2);

    let mut k2: Mat<T> = start(ctl.init, m);
    let mut hy = k2.matvec(&pyt);
    let mut cur = f(&k2);
    let mut objective_trace = vec![cur];
    let mut delta_trace = Vec::new();
    let mut converged = false;
    for iter in 1..=ctl.max_iters {
        let k = k2.matmul(ks);
        let b = b_matrix(p, ks, ks, &k)?;
        let mut l = k2_log_weights(&hy, &b, &pyt, b2)?;
        if l.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical { iter, what: "non-finite exponent in output update".into() });
        }
        log_normalize_cols(&mut l);
        let g = Mat::from_fn(m, m, |y, yt| -b[(y, yt)] + b2 * pyt[yt] * (k2[(y, yt)] / hy[y]).ln());
        let step = guarded_step(&k2, &l, cur, &g, Slack::Rounding, f);
        let delta = step.kernel.l1_distance(&k2) / T::lit(m as f64);
        k2 = step.kernel;
        cur = step.value;
        hy = k2.matvec(&pyt);
        objective_trace.push(cur);
        delta_trace.push(delta);
        if delta < T::lit(ctl.tol) {
            converged = true;
            break;
        }
    }
    let (_, r2) = residual_blocks(p, ks, &Mat::identity(ks.cols()), &k2, T::zero(), b2)?;
    let full = kstar.output().len();
    Ok(SolverRun {
        kernel: square(kstar.output(), embed(&k2, &red.y_keep, full)),
        iterations: delta_trace.len(),
        objective_trace,
        delta_trace,
        converged,
        objective: cur,
        residual: r2.unwrap_or_else(T::zero),
    })
}

/// Input-only laundering: the model's outputs are released untouched and
/// only the query is perturbed.
pub fn oil_x<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>, beta1: f64, ctl: &SolverControls) -> Result<SolverRun<T>> {
    check(px, kstar, beta1, ctl)?;
    let (p, ks) = (px.probs(), kstar.matrix());
    let n = p.len();
    let b1 = T::lit(beta1);
    let f = |k1: &Mat<T>| expected_kl_raw(p, ks, &ks.matmul(k1)) + b1 * mutual_information_raw(p, k1);

    let mut k1: Mat<T> = start(ctl.init, n);
    let mut hx = k1.matvec(p);
    let mut cur = f(&k1);
    let mut objective_trace = vec![cur];
    let mut delta_trace = Vec::new();
    let mut converged = false;
    let zeros = vec![T::zero(); n];
    for iter in 1..=ctl.max_iters {
        let k = ks.matmul(&k1);
        let a = a_matrix(ks, ks, &k)?;
        let mut l = k1_log_weights(&hx, &a, &zeros, b1, T::zero());
        if l.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical { iter, what: "non-finite exponent in input update".into() });
        }
        log_normalize_cols(&mut l);
        let g = Mat::from_fn(n, n, |xt, x| p[x] * (-a[(xt, x)] + b1 * (k1[(xt, x)] / hx[xt]).ln()));
        let step = guarded_step(&k1, &l, cur, &g, Slack::Rounding, f);
        let delta = step.kernel.l1_distance(&k1) / T::lit(n as f64);
        k1 = step.kernel;
        cur = step.value;
        hx = k1.matvec(p);
        objective_trace.push(cur);
        delta_trace.push(delta);
        if delta < T::lit(ctl.tol) {
            converged = true;
            break;
        }
    }
    let m = ks.rows();
    let (r1, _) = residual_blocks(p, ks, &k1, &Mat::identity(m), b1, T::zero())?;
    Ok(SolverRun {
        kernel: square(kstar.input(), k1),
        iterations: delta_trace.len(),
        objective_trace,
        delta_trace,
        converged,
        objective: cur,
        residual: r1.unwrap_or_else(T::zero),
    })
}
