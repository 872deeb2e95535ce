use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SolverControls, SolverRun};
use crate::engine::terms::{kernel_from_log_weights, log_normalize_cols};
use crate::engine::{embed, guarded_step, random_kernel, uniform_kernel, Init, Slack};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::info::mutual_information_raw;
use crate::prob::{Distribution, Kernel};
use crate::scalar::Scalar;

/// Output-only problem for a deterministic model, described by the frequency
/// `r` of each authentic output.
#[derive(Debug, Clone)]
pub struct OilYInput<T> {
    pub r: Distribution<T>,
    pub beta2: f64,
    pub controls: SolverControls,
}

impl<T: Scalar> OilYInput<T> {
    pub fn new(r: Distribution<T>, beta2: f64) -> Self {
        OilYInput { r, beta2, controls: SolverControls::default() }
    }

    pub fn with_controls(mut self, controls: SolverControls) -> Self {
        self.controls = controls;
        self
    }
}

pub type OilYSolution<T> = SolverRun<T>;

/// `-sum_y r(y) ln P(y|y) + beta2 I(r; P)` for a square kernel `P`.
pub fn output_only_objective<T: Scalar>(r: &[T], p: &Mat<T>, beta2: T) -> T {
    objective(r, p, beta2)
}

fn objective<T: Scalar>(r: &[T], p: &Mat<T>, b2: T) -> T {
    let mut v = T::zero();
    for (y, &ry) in r.iter().enumerate() {
        if ry > T::zero() {
            v = v - ry * p[(y, y)].ln();
        }
    }
    if b2 > T::zero() {
        v = v + b2 * mutual_information_raw(r, p);
    }
    v
}

fn gradient<T: Scalar>(r: &[T], p: &Mat<T>, q: &[T], b2: T) -> Mat<T> {
    Mat::from_fn(p.rows(), p.cols(), |y, yt| {
        let mut g = b2 * r[yt] * (p[(y, yt)] / q[y]).ln();
        if y == yt {
            g = g - r[y] / p[(y, y)];
        }
        g
    })
}

/// Proposal log-weights: `ln q(y) + 1{y = y~} / (beta2 P(y~|y~))`.
fn proposal<T: Scalar>(p: &Mat<T>, q: &[T], b2: T) -> Mat<T> {
    Mat::from_fn(p.rows(), p.cols(), |y, yt| {
        let mut l = q[y].ln();
        if y == yt {
            l = l + T::one() / (b2 * p[(y, y)]);
        }
        l
    })
}

/// Matrix-form output-only iteration: every column restarts from the current
/// output marginal `q` and only the diagonal is boosted.
pub fn oil_y<T: Scalar>(input: &OilYInput<T>) -> Result<OilYSolution<T>> {
    let beta2 = input.beta2;
    if !(beta2 >= 0.0 && beta2.is_finite()) {
        return Err(Error::config(format!("beta2 must be finite and non-negative, got {beta2}")));
    }
    let ctl = input.controls;
    if ctl.max_iters == 0 || !(ctl.tol > 0.0) {
        return Err(Error::config("max_iters must be positive and tol > 0"));
    }
    let alphabet = input.r.alphabet().clone();
    let full = alphabet.len();
    if beta2 == 0.0 || full == 1 {
        return Ok(SolverRun {
            kernel: Kernel::identity(alphabet),
            objective_trace: vec![T::zero()],
            delta_trace: Vec::new(),
            converged: true,
            iterations: 0,
            objective: T::zero(),
            residual: T::zero(),
        });
    }

    let keep: Vec<usize> = (0..full).filter(|&y| input.r.get(y) > T::zero()).collect();
    let r: Vec<T> = keep.iter().map(|&y| input.r.get(y)).collect();
    let a = r.len();
    let b2 = T::lit(beta2);
    let norm = T::lit(a as f64);

    let mut p: Mat<T> = match ctl.init {
        Init::Uniform => uniform_kernel(a, a),
        Init::Random { seed } => random_kernel(&mut ChaCha8Rng::seed_from_u64(seed), a, a),
    };
    let mut q = p.matvec(&r);
    let mut cur = objective(&r, &p, b2);
    let mut objective_trace = vec![cur];
    let mut delta_trace = Vec::new();
    let mut converged = false;

    for iter in 1..=ctl.max_iters {
        let mut l = proposal(&p, &q, b2);
        if l.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical { iter, what: "diagonal boost overflowed".into() });
        }
        log_normalize_cols(&mut l);
        let g = gradient(&r, &p, &q, b2);
        let step = guarded_step(&p, &l, cur, &g, Slack::Rounding, |cand| objective(&r, cand, b2));
        let delta = step.kernel.l1_distance(&p) / norm;
        p = step.kernel;
        cur = step.value;
        q = p.matvec(&r);
        objective_trace.push(cur);
        delta_trace.push(delta);
        if delta < T::lit(ctl.tol) {
            converged = true;
            break;
        }
    }

    let rhs = kernel_from_log_weights(proposal(&p, &q, b2))?;
    let residual = rhs.max_abs_diff(&p);
    let kernel = Kernel::from_parts(alphabet.clone(), alphabet, embed(&p, &keep, full));
    Ok(SolverRun {
        kernel,
        iterations: delta_trace.len(),
        objective_trace,
        delta_trace,
        converged,
        objective: cur,
        residual,
    })
}
