//! Brute-force minimizers over discretized kernels, for tiny alphabets only.
//!
//! Every column is restricted to the simplex grid `{k / N : k in N^d, sum k = N}`
//! with `N = 1 / step`. Enumeration order is lexicographic in the column
//! compositions (column 0 most significant) and ties keep the first point, so
//! results are fully deterministic.

use std::io::Write;

use crate::engine::{check_model, square};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::info::{expected_kl_raw, kl_raw, mutual_information_raw};
use crate::prob::{one_hot_kernel, DeterministicModel, Distribution, Kernel};
use crate::scalar::{xlogx_over_y, Scalar};
use crate::special::output_only_objective;

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const DEFAULT_MAX_DIMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    /// Largest alphabet the oracle accepts.
    pub max_dims: usize,
    /// Largest number of objective evaluations the oracle will perform.
    pub budget: u128,
}

impl GridSpec {
    pub fn new(step: f64) -> Result<Self> {
        let g = GridSpec { step, max_dims: DEFAULT_MAX_DIMS, budget: DEFAULT_BUDGET };
        g.divisions()?;
        Ok(g)
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_max_dims(mut self, max_dims: usize) -> Self {
        self.max_dims = max_dims;
        self
    }

    /// `N` such that `step = 1 / N`.
    pub fn divisions(&self) -> Result<usize> {
        if !(self.step > 0.0 && self.step <= 0.5) {
            return Err(Error::config(format!("grid step must lie in (0, 0.5], got {}", self.step)));
        }
        let n = (1.0 / self.step).round();
        if (n * self.step - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("grid step {} does not divide 1", self.step)));
        }
        Ok(n as usize)
    }

    fn check_dims(&self, d: usize) -> Result<()> {
        if d > self.max_dims {
            return Err(Error::config(format!("alphabet of size {d} exceeds the oracle limit of {}", self.max_dims)));
        }
        Ok(())
    }

    fn check_budget(&self, required: u128) -> Result<()> {
        if required > self.budget {
            return Err(Error::Budget { required, budget: self.budget });
        }
        Ok(())
    }
}

/// Number of points on the `d`-symbol simplex grid with `n` divisions.
pub fn simplex_grid_size(n: usize, d: usize) -> u128 {
    // binomial(n + d - 1, d - 1)
    let (top, k) = ((n + d - 1) as u128, (d - 1) as u128);
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

/// All grid points on the `d`-symbol simplex, in lexicographic order.
pub fn simplex_grid<T: Scalar>(n: usize, d: usize) -> Vec<Vec<T>> {
    fn rec(rest: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if d == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=rest {
            prefix.push(k);
            rec(rest - k, d - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut ints = Vec::new();
    rec(n, d, &mut Vec::with_capacity(d), &mut ints);
    let denom = T::lit(n as f64);
    ints.into_iter()
        .map(|c| c.into_iter().map(|k| T::lit(k as f64) / denom).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct GridOptimum<T> {
    pub kernel: Kernel<T>,
    pub objective: T,
    pub evaluations: u128,
}

#[derive(Debug, Clone)]
pub struct JointGridOptimum<T> {
    pub k1: Kernel<T>,
    pub k2: Kernel<T>,
    pub objective: T,
    pub evaluations: u128,
}

/// Calls `visit` with every square kernel whose columns are grid points,
/// in lexicographic order.
fn for_each_kernel<T: Scalar>(points: &[Vec<T>], d: usize, mut visit: impl FnMut(&Mat<T>)) {
    let g = points.len();
    let mut idx = vec![0usize; d];
    let mut k = Mat::from_fn(d, d, |r, _| points[0][r]);
    loop {
        visit(&k);
        // odometer, last column fastest
        let mut c = d;
        loop {
            if c == 0 {
                return;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < g {
                k.col_mut(c).copy_from_slice(&points[idx[c]]);
                break;
            }
            idx[c] = 0;
            k.col_mut(c).copy_from_slice(&points[0]);
        }
    }
}

fn scan_square<T: Scalar>(d: usize, grid: &GridSpec, mut f: impl FnMut(&Mat<T>) -> T) -> Result<(Mat<T>, T, u128)> {
    grid.check_dims(d)?;
    let n = grid.divisions()?;
    let required = simplex_grid_size(n, d).saturating_pow(d as u32);
    grid.check_budget(required)?;
    let points = simplex_grid::<T>(n, d);
    let mut best: Option<(Mat<T>, T)> = None;
    for_each_kernel(&points, d, |k| {
        let v = f(k);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((k.clone(), v));
        }
    });
    let (k, v) = best.expect("grid is non-empty");
    Ok((k, v, required))
}

/// Grid minimizer of the output-only objective for a deterministic model with
/// output frequencies `r`.
pub fn grid_search_oil_y<T: Scalar>(r: &Distribution<T>, beta2: f64, grid: &GridSpec) -> Result<GridOptimum<T>> {
    check_beta(beta2)?;
    let b2 = T::lit(beta2);
    let (k, v, evaluations) = scan_square(r.len(), grid, |p| output_only_objective(r.probs(), p, b2))?;
    Ok(GridOptimum { kernel: square(r.alphabet(), k), objective: v, evaluations })
}

/// Grid minimizer of the output-only objective for an arbitrary model.
pub fn grid_search_oil_y_general<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta2: f64,
    grid: &GridSpec,
) -> Result<GridOptimum<T>> {
    check_model(px, kstar)?;
    check_beta(beta2)?;
    let b2 = T::lit(beta2);
    let (p, ks) = (px.probs(), kstar.matrix());
    let pyt = ks.matvec(p);
    let (k, v, evaluations) = scan_square(ks.rows(), grid, |k2| {
        expected_kl_raw(p, ks, &k2.matmul(ks)) + b2 * mutual_information_raw(&pyt, k2)
    })?;
    Ok(GridOptimum { kernel: square(kstar.output(), k), objective: v, evaluations })
}

/// Grid minimizer of the input-only objective for a deterministic model.
///
/// Uses `I(X; X~) = min_h sum_x p(x) KL(K1(.|x) || h)`: for every grid point
/// `h` the columns decouple and are minimized one at a time, which costs
/// `|grid|^2 * n` column evaluations instead of `|grid|^n`. The candidate
/// with the lowest true objective is returned.
pub fn grid_search_oil_x<T: Scalar>(
    px: &Distribution<T>,
    f: &DeterministicModel,
    beta1: f64,
    grid: &GridSpec,
) -> Result<GridOptimum<T>> {
    grid_search_oil_x_kernel(px, &one_hot_kernel(f), beta1, grid)
}

/// [`grid_search_oil_x`] for an arbitrary model kernel.
pub fn grid_search_oil_x_kernel<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta1: f64,
    grid: &GridSpec,
) -> Result<GridOptimum<T>> {
    check_model(px, kstar)?;
    check_beta(beta1)?;
    let d = px.len();
    grid.check_dims(d)?;
    let n = grid.divisions()?;
    let g = simplex_grid_size(n, d);
    let required = g * g * d as u128;
    grid.check_budget(required)?;

    let b1 = T::lit(beta1);
    let (p, ks) = (px.probs(), kstar.matrix());
    let points = simplex_grid::<T>(n, d);
    // fit[c][x] = KL(ks(.|x) || ks c), neg_h[c] = sum c ln c
    let fit: Vec<Vec<T>> = points
        .iter()
        .map(|c| {
            let out = ks.matvec(c);
            (0..d).map(|x| kl_raw(ks.col(x), &out)).collect()
        })
        .collect();
    let neg_h: Vec<T> = points.iter().map(|c| c.iter().map(|&v| xlogx_over_y(v, T::one())).sum()).collect();
    let value = |k1: &Mat<T>| expected_kl_raw(p, ks, &ks.matmul(k1)) + b1 * mutual_information_raw(p, k1);

    let mut best: Option<(Mat<T>, T)> = None;
    let mut k1 = Mat::zeros(d, d);
    for h in &points {
        let log_h: Vec<T> = h.iter().map(|&v| v.ln()).collect();
        for x in 0..d {
            let mut best_col = 0;
            let mut best_val = T::infinity();
            for (ci, c) in points.iter().enumerate() {
                let mut cross = T::zero();
                let mut feasible = true;
                for (&cv, &lh) in c.iter().zip(&log_h) {
                    if cv > T::zero() {
                        if lh == T::neg_infinity() {
                            feasible = false;
                            break;
                        }
                        cross = cross + cv * lh;
                    }
                }
                if !feasible {
                    continue;
                }
                let v = fit[ci][x] + b1 * (neg_h[ci] - cross);
                if v < best_val {
                    best_val = v;
                    best_col = ci;
                }
            }
            k1.col_mut(x).copy_from_slice(&points[best_col]);
        }
        let v = value(&k1);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((k1.clone(), v));
        }
    }
    let (k, v) = best.expect("grid is non-empty");
    Ok(GridOptimum { kernel: square(kstar.input(), k), objective: v, evaluations: required })
}

/// Joint grid minimizer over both kernels (practical for binary alphabets only).
pub fn exhaustive_objective_scan<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    beta1: f64,
    beta2: f64,
    grid: &GridSpec,
) -> Result<JointGridOptimum<T>> {
    check_model(px, kstar)?;
    check_beta(beta1)?;
    check_beta(beta2)?;
    let (nx, ny) = (px.len(), kstar.output().len());
    grid.check_dims(nx.max(ny))?;
    let n = grid.divisions()?;
    let g1 = simplex_grid_size(n, nx).saturating_pow(nx as u32);
    let g2 = simplex_grid_size(n, ny).saturating_pow(ny as u32);
    let required = g1.saturating_mul(g2);
    grid.check_budget(required)?;

    let (b1, b2) = (T::lit(beta1), T::lit(beta2));
    let (p, ks) = (px.probs(), kstar.matrix());
    let px_points = simplex_grid::<T>(n, nx);
    let py_points = simplex_grid::<T>(n, ny);
    let mut best: Option<(Mat<T>, Mat<T>, T)> = None;
    for_each_kernel(&px_points, nx, |k1| {
        let ks_k1 = ks.matmul(k1);
        let pyt = ks_k1.matvec(p);
        let leak_in = b1 * mutual_information_raw(p, k1);
        for_each_kernel(&py_points, ny, |k2| {
            let k = k2.matmul(&ks_k1);
            let v = expected_kl_raw(p, ks, &k) + leak_in + b2 * mutual_information_raw(&pyt, k2);
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((k1.clone(), k2.clone(), v));
            }
        });
    });
    let (k1, k2, v) = best.expect("grid is non-empty");
    Ok(JointGridOptimum {
        k1: square(px.alphabet(), k1),
        k2: square(kstar.output(), k2),
        objective: v,
        evaluations: required,
    })
}

/// Writes `k00,k11,objective` for every grid kernel of a binary output-only
/// problem, where `k00 = P(0|0)` and `k11 = P(1|1)`.
pub fn dump_oil_y_grid_csv<T: Scalar, W: Write>(r: &Distribution<T>, beta2: f64, grid: &GridSpec, mut out: W) -> Result<()> {
    check_beta(beta2)?;
    if r.len() != 2 {
        return Err(Error::config("the grid dump is only defined for binary alphabets"));
    }
    let n = grid.divisions()?;
    let required = simplex_grid_size(n, 2).pow(2);
    grid.check_budget(required)?;
    let b2 = T::lit(beta2);
    let points = simplex_grid::<T>(n, 2);
    writeln!(out, "k00,k11,objective")?;
    let mut status = Ok(());
    for_each_kernel(&points, 2, |k| {
        if status.is_ok() {
            status = writeln!(out, "{},{},{}", k[(0, 0)], k[(1, 1)], output_only_objective(r.probs(), k, b2));
        }
    });
    status?;
    out.flush()?;
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::config(format!("tradeoff weight must be finite and non-negative, got {beta}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
