//! Sufficient-decrease guard around the plain fixed-point proposals.
//!
//! The undamped proposal is always tried first and taken whenever it lowers the
//! objective enough. Otherwise the step is shortened along the geometric path
//! `ln K(lambda) = (1 - lambda) ln K_old + lambda ln K_prop` (renormalized),
//! halving `lambda` until the Armijo condition holds.

use super::terms::{exp_floored, ln_floored, log_normalize_cols};
use crate::matrix::Mat;
use crate::scalar::Scalar;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 40;

/// How much rounding noise in the objective the acceptance test forgives.
#[derive(Clone, Copy)]
pub(crate) enum Slack {
    /// Strict comparison. The joint iteration needs this: near its fixed point
    /// the plain step can oscillate at rounding level without shrinking.
    Strict,
    /// A few ulps of the current value, so single-kernel solvers whose plain
    /// step always descends do not start backtracking on rounding noise.
    Rounding,
}

pub(crate) struct Step<T> {
    pub kernel: Mat<T>,
    pub value: T,
}

/// `proposal_log` holds normalized column log-probabilities of the plain update.
pub(crate) fn guarded_step<T: Scalar>(
    old: &Mat<T>,
    proposal_log: &Mat<T>,
    current: T,
    gradient: &Mat<T>,
    slack: Slack,
    mut objective: impl FnMut(&Mat<T>) -> T,
) -> Step<T> {
    let sigma = T::lit(ARMIJO);
    let noise = match slack {
        Slack::Strict => T::zero(),
        Slack::Rounding => T::epsilon() * T::lit(16.0) * (current.abs() + T::one()),
    };
    let old_log = ln_floored(old);
    let mut lambda = T::one();
    for halvings in 0..=MAX_HALVINGS {
        let cand = if halvings == 0 {
            exp_floored(proposal_log)
        } else {
            let mut l = Mat::from_fn(old.rows(), old.cols(), |r, c| {
                (T::one() - lambda) * old_log[(r, c)] + lambda * proposal_log[(r, c)]
            });
            log_normalize_cols(&mut l);
            exp_floored(&l)
        };
        let v = objective(&cand);
        let predicted: T = gradient
            .as_slice()
            .iter()
            .zip(cand.as_slice().iter().zip(old.as_slice()))
            .map(|(&g, (&a, &b))| g * (a - b))
            .sum();
        if v.is_finite() && v <= current + noise && v <= current + sigma * predicted + noise {
            return Step { kernel: cand, value: v };
        }
        lambda = lambda * T::lit(0.5);
    }
    Step { kernel: old.clone(), value: current }
}
