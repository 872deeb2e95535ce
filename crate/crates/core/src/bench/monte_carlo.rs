use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::{expected_kl, index_for_u, Distribution, Kernel};
use crate::scalar::Scalar;

fn check_chain<T: Scalar>(kstar: &Kernel<T>, k1: &Kernel<T>, k2: &Kernel<T>, px: &Distribution<T>) -> Result<()> {
    if px.alphabet() != kstar.input() || !k1.is_square_over(kstar.input()) || !k2.is_square_over(kstar.output()) {
        return Err(Error::shape("kernels must be square over the model's input and output alphabets"));
    }
    Ok(())
}

/// Fraction of queries on which the laundered response equals the authentic one.
///
/// The authentic and the laundered model draw share one uniform variate, so a
/// query that passes through `k1` unchanged reproduces the authentic response
/// exactly; with identity kernels the estimate is exactly 1.
pub fn monte_carlo_agreement<T: Scalar>(
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    px: &Distribution<T>,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    check_chain(kstar, k1, k2, px)?;
    if n_samples == 0 {
        return Err(Error::config("n_samples must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..n_samples {
        let x = px.sample(&mut rng);
        let xt = k1.sample(x, &mut rng);
        let u: f64 = rng.random();
        let authentic = index_for_u(kstar.column(x), u);
        let yt = index_for_u(kstar.column(xt), u);
        let y = k2.sample(yt, &mut rng);
        hits += usize::from(y == authentic);
    }
    Ok(hits as f64 / n_samples as f64)
}

/// Simulated extraction attack: fits an add-one smoothed conditional table to
/// `n_queries` laundered query/response pairs. Returns the estimate and its
/// expected KL divergence from the authentic model (low means extraction works).
pub fn surrogate_extraction<T: Scalar>(
    kstar: &Kernel<T>,
    k1: &Kernel<T>,
    k2: &Kernel<T>,
    px: &Distribution<T>,
    n_queries: usize,
    seed: u64,
) -> Result<(Kernel<T>, T)> {
    check_chain(kstar, k1, k2, px)?;
    if n_queries == 0 {
        return Err(Error::config("n_queries must be at least 1"));
    }
    let (n, m) = (px.len(), kstar.output().len());
    let mut counts = vec![0u64; n * m];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_queries {
        let x = px.sample(&mut rng);
        let xt = k1.sample(x, &mut rng);
        let yt = kstar.sample(xt, &mut rng);
        let y = k2.sample(yt, &mut rng);
        counts[x * m + y] += 1;
    }
    let mat = Mat::from_fn(m, n, |y, x| {
        let total: u64 = counts[x * m..(x + 1) * m].iter().sum();
        T::lit((counts[x * m + y] + 1) as f64 / (total + m as u64) as f64)
    });
    let estimate = Kernel::new(kstar.input().clone(), kstar.output().clone(), mat)?;
    let fidelity = expected_kl(px, kstar, &estimate)?;
    Ok((estimate, fidelity))
}
