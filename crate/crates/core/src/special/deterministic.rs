use crate::engine::terms::{d_vector, kernel_from_log_weights};
use crate::engine::AlgorithmState;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::prob::{DeterministicModel, Distribution, Kernel};
use crate::scalar::Scalar;

/// One input update followed by one output update for a deterministic model.
///
/// Same result as the general updates applied to the one-hot kernel of `f`,
/// but every sum over the model's outputs collapses to a lookup and every sum
/// over laundered inputs to a sum over a preimage class of `f`.
pub fn joint_deterministic_updates<T: Scalar>(
    state: &AlgorithmState<T>,
    px: &Distribution<T>,
    f: &DeterministicModel,
    beta1: f64,
    beta2: f64,
) -> Result<(Kernel<T>, Kernel<T>)> {
    if px.alphabet() != f.input() || !state.k1.is_square_over(f.input()) || !state.k2.is_square_over(f.output()) {
        return Err(Error::shape("state kernels do not match the model's alphabets"));
    }
    if !(beta1 > 0.0 && beta2 > 0.0) {
        return Err(Error::config("the joint updates need beta1 > 0 and beta2 > 0"));
    }
    let (b1, b2) = (T::lit(beta1), T::lit(beta2));
    let map = f.map();
    let (n, m) = (map.len(), f.output().len());
    let (p, k1, k2) = (px.probs(), state.k1.matrix(), state.k2.matrix());
    let (hx, hy, pyt) = (state.marg_xtilde.probs(), state.marg_y.probs(), state.marg_ytilde.probs());

    // probability that the current cascade answers x with f(x)
    let hit = |k1: &Mat<T>, x: usize| -> T {
        (0..n).map(|xt| k2[(map[x], map[xt])] * k1[(xt, x)]).sum()
    };

    let d = d_vector(k2, hy);
    let r = b2 / b1;
    let mut l1: Mat<T> = Mat::zeros(n, n);
    for x in 0..n {
        let kx = hit(k1, x);
        if kx <= T::zero() {
            return Err(Error::Positivity(format!("effective kernel vanishes at input {x}")));
        }
        for xt in 0..n {
            l1[(xt, x)] = hx[xt].ln() + k2[(map[x], map[xt])] / kx / b1 - r * d[map[xt]];
        }
    }
    let k1_new = kernel_from_log_weights(l1)?;

    // fiber[(yt, x)] = mass the new input kernel sends from x into the class of yt
    let mut fiber: Mat<T> = Mat::zeros(m, n);
    for x in 0..n {
        for xt in 0..n {
            fiber[(map[xt], x)] = fiber[(map[xt], x)] + k1_new[(xt, x)];
        }
    }
    let mut b: Mat<T> = Mat::zeros(m, m);
    for x in 0..n {
        if p[x] <= T::zero() {
            continue;
        }
        let y = map[x];
        let kmix: T = (0..m).map(|yt| k2[(y, yt)] * fiber[(yt, x)]).sum();
        if kmix <= T::zero() {
            return Err(Error::Positivity(format!("effective kernel vanishes at input {x}")));
        }
        let w = p[x] / kmix;
        for yt in 0..m {
            b[(y, yt)] = b[(y, yt)] + w * fiber[(yt, x)];
        }
    }
    if let Some(index) = pyt.iter().position(|&v| v <= T::zero()) {
        return Err(Error::DegenerateMarginal { index });
    }
    let l2 = Mat::from_fn(m, m, |y, yt| hy[y].ln() + b[(y, yt)] / (b2 * pyt[yt]));
    let k2_new = kernel_from_log_weights(l2)?;
    Ok((
        Kernel::from_parts(f.input().clone(), f.input().clone(), k1_new),
        Kernel::from_parts(f.output().clone(), f.output().clone(), k2_new),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{update_k1, update_k2, Init};
    use crate::prob::{one_hot_kernel, Alphabet};

    #[test]
    fn agrees_with_general_updates_on_one_hot_kernel() {
        let (xa, ya) = (Alphabet::indexed(4).unwrap(), Alphabet::indexed(3).unwrap());
        let px = Distribution::new(xa.clone(), vec![0.1, 0.4, 0.3, 0.2]).unwrap();
        let f = DeterministicModel::new(xa, ya, vec![2, 0, 0, 1]).unwrap();
        let ks = one_hot_kernel(&f);
        let state = AlgorithmState::initial(&px, &ks, Init::Random { seed: 4 }).unwrap();
        let (b1, b2) = (0.7, 1.3);
        let (k1, k2) = joint_deterministic_updates(&state, &px, &f, b1, b2).unwrap();
        let g1 = update_k1(&state, &px, &ks, b1, b2).unwrap();
        let mid = AlgorithmState { k1: g1.clone(), ..state.clone() };
        let g2 = update_k2(&mid, &px, &ks, b2).unwrap();
        assert!(k1.max_abs_diff(&g1) < 1e-14);
        assert!(k2.max_abs_diff(&g2) < 1e-14);
    }

    #[test]
    fn rejects_zero_weights_and_wrong_shapes() {
        let a = Alphabet::indexed(2).unwrap();
        let px: Distribution<f64> = Distribution::uniform(a.clone());
        let f = DeterministicModel::new(a.clone(), a.clone(), vec![0, 1]).unwrap();
        let state = AlgorithmState::initial(&px, &one_hot_kernel(&f), Init::Uniform).unwrap();
        assert!(joint_deterministic_updates(&state, &px, &f, 0.0, 1.0).is_err());
        let g = DeterministicModel::new(a.clone(), Alphabet::indexed(3).unwrap(), vec![0, 2]).unwrap();
        assert!(joint_deterministic_updates(&state, &px, &g, 1.0, 1.0).is_err());
    }
}
