use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::monte_carlo::monte_carlo_agreement;
use crate::engine::{oil_optimize, OilConfig};
use crate::error::{Error, Result};
use crate::prob::info::{expected_kl_raw, mutual_information_raw};
use crate::prob::{Distribution, Kernel};
use crate::scalar::Scalar;

/// Which kernels a sweep is allowed to perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Joint,
    OutputOnly,
    InputOnly,
}

impl Mode {
    /// `(beta1, beta2)` for a single sweep weight.
    pub fn weights(self, beta: f64) -> (f64, f64) {
        match self {
            Mode::Joint => (beta, beta),
            Mode::OutputOnly => (0.0, beta),
            Mode::InputOnly => (beta, 0.0),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joint" => Ok(Mode::Joint),
            "output-only" | "output_only" => Ok(Mode::OutputOnly),
            "input-only" | "input_only" => Ok(Mode::InputOnly),
            other => Err(Error::config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Joint => "joint",
            Mode::OutputOnly => "output-only",
            Mode::InputOnly => "input-only",
        })
    }
}

/// Exact information quantities of a laundering pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMetrics {
    pub utility_kl: f64,
    pub mi_input: f64,
    pub mi_output: f64,
    pub objective: f64,
}

pub fn exact_metrics<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    beta1: f64,
    beta2: f64,
) -> Result<ExactMetrics> {
    let k = k1.then(kstar)?.then(k2)?;
    let p = px.probs();
    let pxt = k1.matrix().matvec(p);
    let pyt = kstar.matrix().matvec(&pxt);
    let utility_kl = expected_kl_raw(p, kstar.matrix(), k.matrix()).as_f64();
    let mi_input = mutual_information_raw(p, k1.matrix()).as_f64();
    let mi_output = mutual_information_raw(&pyt, k2.matrix()).as_f64();
    // skip zero-weight terms so an infinite weight never meets a zero leak
    let mut objective = utility_kl;
    if beta1 > 0.0 {
        objective += beta1 * mi_input;
    }
    if beta2 > 0.0 {
        objective += beta2 * mi_output;
    }
    Ok(ExactMetrics { utility_kl, mi_input, mi_output, objective })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub beta: f64,
    pub utility_kl: f64,
    pub mi_input: f64,
    pub mi_output: f64,
    pub objective: f64,
    pub empirical_agreement: f64,
}

impl TradeoffPoint {
    pub(crate) fn values(&self) -> [f64; 6] {
        [self.beta, self.utility_kl, self.mi_input, self.mi_output, self.objective, self.empirical_agreement]
    }

    pub(crate) fn from_values(v: [f64; 6]) -> Self {
        TradeoffPoint { beta: v[0], utility_kl: v[1], mi_input: v[2], mi_output: v[3], objective: v[4], empirical_agreement: v[5] }
    }
}

/// Points sorted by strictly increasing `beta`, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    points: Vec<TradeoffPoint>,
}

impl TradeoffCurve {
    pub fn new(points: Vec<TradeoffPoint>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[0].beta < w[1].beta)) {
            return Err(Error::domain("curve betas must be strictly increasing"));
        }
        if points.iter().any(|p| p.values().iter().any(|v| !v.is_finite())) {
            return Err(Error::domain("curve entries must be finite"));
        }
        Ok(TradeoffCurve { points })
    }

    pub fn points(&self) -> &[TradeoffPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepControls {
    /// Solver settings; its weights are overwritten per point.
    pub solver: OilConfig,
    /// Monte Carlo sample count for the agreement column.
    pub samples: usize,
}

impl Default for SweepControls {
    fn default() -> Self {
        SweepControls { solver: OilConfig::default(), samples: 10_000 }
    }
}

/// Solves at every weight in `betas` and tabulates the tradeoff. Every
/// point's agreement estimate uses the same `seed`.
pub fn sweep<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    betas: &[f64],
    mode: Mode,
    controls: &SweepControls,
    seed: u64,
) -> Result<TradeoffCurve> {
    if betas.is_empty() {
        return Err(Error::config("at least one beta is required"));
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
        return Err(Error::config(format!("betas must be finite and non-negative, got {b}")));
    }
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::config("betas must be strictly increasing"));
    }
    if controls.samples == 0 {
        return Err(Error::config("samples must be positive"));
    }
    let mut points = Vec::with_capacity(betas.len());
    for &beta in betas {
        let at = |e: Error| Error::AtBeta { beta, source: Box::new(e) };
        let (b1, b2) = mode.weights(beta);
        let config = OilConfig { beta1: b1, beta2: b2, ..controls.solver };
        let sol = oil_optimize(px, kstar, &config).map_err(at)?;
        let m = exact_metrics(px, kstar, &sol.k1, &sol.k2, b1, b2).map_err(at)?;
        let agreement = monte_carlo_agreement(kstar, &sol.k1, &sol.k2, px, controls.samples, seed).map_err(at)?;
        points.push(TradeoffPoint {
            beta,
            utility_kl: m.utility_kl,
            mi_input: m.mi_input,
            mi_output: m.mi_output,
            objective: m.objective,
            empirical_agreement: agreement,
        });
    }
    TradeoffCurve::new(points)
}
