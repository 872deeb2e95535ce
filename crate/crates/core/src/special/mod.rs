//! Single-kernel solvers and closed forms.
//!
//! When only the output (or only the input) is perturbed the other kernel is
//! the identity and the problem is convex in the remaining one.

mod deterministic;
mod general;
mod limits;
mod oil_y;

use serde::{Deserialize, Serialize};

use crate::engine::Init;
use crate::prob::Kernel;

pub use deterministic::joint_deterministic_updates;
pub use general::{oil_x, oil_y_general};
pub use limits::{beta_infinity_kernel, beta_zero_kernel};
pub use oil_y::{oil_y, output_only_objective, OilYInput, OilYSolution};

/// Iteration controls shared by the single-kernel solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverControls {
    pub max_iters: usize,
    pub tol: f64,
    pub init: Init,
}

impl Default for SolverControls {
    fn default() -> Self {
        SolverControls { max_iters: 10_000, tol: 1e-10, init: Init::Uniform }
    }
}

/// Result of a single-kernel solver.
#[derive(Debug, Clone)]
pub struct SolverRun<T> {
    pub kernel: Kernel<T>,
    /// Objective at the start and after every iteration.
    pub objective_trace: Vec<T>,
    /// Mean absolute change of the kernel per iteration.
    pub delta_trace: Vec<T>,
    pub converged: bool,
    pub iterations: usize,
    pub objective: T,
    pub residual: T,
}
