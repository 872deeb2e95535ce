//! JSON form of [`OilSolution`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{OilConfig, OilSolution, Route};
use crate::error::Result;
use crate::prob::io::KernelFile;
use crate::prob::Kernel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub route: Route,
    pub config: OilConfig,
    pub objective: f64,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub k1: KernelFile,
    pub k2: KernelFile,
    pub effective: KernelFile,
    pub objective_trace: Vec<f64>,
    pub delta_trace: Vec<f64>,
}

impl SolutionFile {
    pub fn from_solution<T: Scalar>(s: &OilSolution<T>) -> Self {
        let f = |v: &[T]| v.iter().map(|x| x.as_f64()).collect();
        SolutionFile {
            route: s.route,
            config: s.config,
            objective: s.objective.as_f64(),
            residual: s.residual.as_f64(),
            converged: s.converged,
            iterations: s.iterations,
            k1: KernelFile::from_kernel(&s.k1),
            k2: KernelFile::from_kernel(&s.k2),
            effective: KernelFile::from_kernel(&s.effective),
            objective_trace: f(&s.objective_trace),
            delta_trace: f(&s.delta_trace),
        }
    }

    /// The laundering pair `(k1, k2)`.
    pub fn kernels<T: Scalar>(&self) -> Result<(Kernel<T>, Kernel<T>)> {
        Ok((self.k1.clone().into_kernel()?, self.k2.clone().into_kernel()?))
    }
}

pub fn solution_to_json<T: Scalar>(s: &OilSolution<T>) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&SolutionFile::from_solution(s))?;
    text.push('\n');
    Ok(text)
}

pub fn write_solution<T: Scalar>(path: impl AsRef<Path>, s: &OilSolution<T>) -> Result<()> {
    fs::write(path, solution_to_json(s)?)?;
    Ok(())
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<SolutionFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
