use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Gamma};
use serde::{Deserialize, Serialize};

use super::monte_carlo::monte_carlo_agreement;
use super::sweep::{exact_metrics, TradeoffPoint};
use crate::engine::derived_seed;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::{Alphabet, Distribution, Kernel};
use crate::scalar::Scalar;

/// Random kernel whose column `j` is Dirichlet with concentration `a_param`
/// at index `j` and `b_param` everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletSpec {
    pub a_param: f64,
    pub b_param: f64,
    pub alphabet_size: usize,
    pub seed: u64,
}

impl DirichletSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a_param", self.a_param), ("b_param", self.b_param)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.alphabet_size == 0 {
            return Err(Error::config("alphabet_size must be positive"));
        }
        Ok(())
    }
}

/// Draws the kernel from normalized independent Gamma variates.
pub fn dirichlet_kernel<T: Scalar>(spec: &DirichletSpec) -> Result<Kernel<T>> {
    spec.validate()?;
    let n = spec.alphabet_size;
    let on = Gamma::new(spec.a_param, 1.0).map_err(|e| Error::config(e.to_string()))?;
    let off = Gamma::new(spec.b_param, 1.0).map_err(|e| Error::config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut mat = Mat::zeros(n, n);
    for c in 0..n {
        let draws: Vec<f64> = (0..n).map(|r| if r == c { on.sample(&mut rng) } else { off.sample(&mut rng) }).collect();
        let s: f64 = draws.iter().sum();
        for (r, g) in draws.into_iter().enumerate() {
            // tiny concentrations can underflow every draw; fall back to uniform
            mat[(r, c)] = T::lit(if s > 0.0 { g / s } else { 1.0 / n as f64 });
        }
    }
    let a = Alphabet::indexed(n)?;
    Kernel::new(a.clone(), a, mat)
}

/// One baseline row: metrics averaged over the replications of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRow {
    pub point: TradeoffPoint,
    pub a_param: f64,
    pub b_param: f64,
    pub replications: usize,
}

/// Random output kernels (input untouched) as a non-optimized comparison.
///
/// Replication `i` of pair `k` uses `derived_seed(seed, k * replications + i)`
/// for the kernel and the same seed for the agreement estimate.
pub fn dirichlet_baseline<T: Scalar>(
    px: &Distribution<T>,
    kstar: &Kernel<T>,
    pairs: &[(f64, f64)],
    replications: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<BenchmarkRow>> {
    if replications == 0 || samples == 0 {
        return Err(Error::config("replications and samples must be positive"));
    }
    let y = kstar.output().clone();
    let k1 = Kernel::identity(px.alphabet().clone());
    let mut rows = Vec::with_capacity(pairs.len());
    for (k, &(a, b)) in pairs.iter().enumerate() {
        let mut acc = [0.0; 4];
        for i in 0..replications {
            let s = derived_seed(seed, k * replications + i);
            let spec = DirichletSpec { a_param: a, b_param: b, alphabet_size: y.len(), seed: s };
            let k2 = Kernel::new(y.clone(), y.clone(), dirichlet_kernel::<T>(&spec)?.into_matrix())?;
            let p = exact_metrics(px, kstar, &k1, &k2, 0.0, 0.0)?;
            let agree = monte_carlo_agreement(kstar, &k1, &k2, px, samples, s)?;
            for (slot, v) in acc.iter_mut().zip([p.utility_kl, p.mi_input, p.mi_output, agree]) {
                *slot += v;
            }
        }
        let [u, mi_in, mi_out, agree] = acc.map(|v| v / replications as f64);
        rows.push(BenchmarkRow {
            point: TradeoffPoint { beta: 0.0, utility_kl: u, mi_input: mi_in, mi_output: mi_out, objective: u, empirical_agreement: agree },
            a_param: a,
            b_param: b,
            replications,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, b: f64, seed: u64) -> DirichletSpec {
        DirichletSpec { a_param: a, b_param: b, alphabet_size: 4, seed }
    }

    #[test]
    fn deterministic_and_stochastic() {
        let k1 = dirichlet_kernel::<f64>(&spec(5.0, 2.0, 9)).unwrap();
        let k2 = dirichlet_kernel::<f64>(&spec(5.0, 2.0, 9)).unwrap();
        assert_eq!(k1, k2);
        for c in 0..4 {
            assert!((k1.column(c).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_ne!(k1, dirichlet_kernel::<f64>(&spec(5.0, 2.0, 10)).unwrap());
    }

    #[test]
    fn concentrated_diagonal() {
        let mean: f64 = (0..50).map(|s| dirichlet_kernel::<f64>(&spec(100.0, 1.0, s)).unwrap().mean_diagonal()).sum::<f64>() / 50.0;
        assert!(mean > 0.9, "{mean}");
    }

    #[test]
    fn symmetric_parameters_have_no_diagonal_preference() {
        let mean: f64 = (0..400).map(|s| dirichlet_kernel::<f64>(&spec(3.0, 3.0, s)).unwrap().mean_diagonal()).sum::<f64>() / 400.0;
        assert!((mean - 0.25).abs() < 0.02, "{mean}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(dirichlet_kernel::<f64>(&spec(0.0, 1.0, 0)).is_err());
        assert!(dirichlet_kernel::<f64>(&spec(1.0, f64::NAN, 0)).is_err());
    }
}
