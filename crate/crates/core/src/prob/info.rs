//! Entropy, divergence and mutual information, all in nats.

use super::{Distribution, Kernel};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{xlogx_over_y, Scalar};

pub fn entropy<T: Scalar>(p: &Distribution<T>) -> T {
    entropy_raw(p.probs())
}

/// `KL(p || q)`; `+inf` when `p` puts mass where `q` has none.
pub fn kl_divergence<T: Scalar>(p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::shape("KL divergence between different alphabets"));
    }
    Ok(kl_raw(p.probs(), q.probs()))
}

/// `I(In; Out)` when `In ~ input_dist` and `Out | In ~ k`.
pub fn mutual_information<T: Scalar>(input_dist: &Distribution<T>, k: &Kernel<T>) -> Result<T> {
    if input_dist.alphabet() != k.input() {
        return Err(Error::shape("distribution alphabet differs from kernel input alphabet"));
    }
    Ok(mutual_information_raw(input_dist.probs(), k.matrix()))
}

/// `sum_x px(x) KL(kstar(.|x) || k(.|x))`.
pub fn expected_kl<T: Scalar>(px: &Distribution<T>, kstar: &Kernel<T>, k: &Kernel<T>) -> Result<T> {
    if kstar.input() != k.input() || kstar.output() != k.output() {
        return Err(Error::shape("expected KL between kernels over different alphabets"));
    }
    if px.alphabet() != kstar.input() {
        return Err(Error::shape("distribution alphabet differs from kernel input alphabet"));
    }
    Ok(expected_kl_raw(px.probs(), kstar.matrix(), k.matrix()))
}

pub(crate) fn entropy_raw<T: Scalar>(p: &[T]) -> T {
    p.iter()
        .filter(|&&v| v > T::zero())
        .map(|&v| -v * v.ln())
        .sum()
}

pub(crate) fn kl_raw<T: Scalar>(p: &[T], q: &[T]) -> T {
    let s: T = p.iter().zip(q).map(|(&a, &b)| xlogx_over_y(a, b)).sum();
    // rounding can push an exact zero slightly negative
    s.max(T::zero())
}

pub(crate) fn mutual_information_raw<T: Scalar>(input: &[T], k: &Mat<T>) -> T {
    let m = output_marginal(input, k);
    let s: T = input
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > T::zero())
        .map(|(i, &p)| p * kl_raw(k.col(i), &m))
        .sum();
    s.max(T::zero())
}

/// `K p`, with each entry clamped to the range of its row over the support of
/// `p`: a mixture of equal values then comes out exactly equal to them.
fn output_marginal<T: Scalar>(input: &[T], k: &Mat<T>) -> Vec<T> {
    let mut m = k.matvec(input);
    for (y, v) in m.iter_mut().enumerate() {
        let (lo, hi) = input
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > T::zero())
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (x, _)| (lo.min(k[(y, x)]), hi.max(k[(y, x)])));
        if lo <= hi {
            *v = v.max(lo).min(hi);
        }
    }
    m
}

pub(crate) fn expected_kl_raw<T: Scalar>(px: &[T], kstar: &Mat<T>, k: &Mat<T>) -> T {
    px.iter()
        .enumerate()
        .filter(|(_, &p)| p > T::zero())
        .map(|(x, &p)| p * kl_raw(kstar.col(x), k.col(x)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Alphabet;

    fn bin() -> Alphabet {
        Alphabet::indexed(2).unwrap()
    }

    fn d(p: &[f64]) -> Distribution<f64> {
        Distribution::new(Alphabet::indexed(p.len()).unwrap(), p.to_vec()).unwrap()
    }

    #[test]
    fn kl_examples() {
        let p = d(&[0.2, 0.3, 0.5]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let v = kl_divergence(&d(&[1.0, 0.0]), &d(&[0.5, 0.5])).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        let v = kl_divergence(&d(&[0.75, 0.25]), &d(&[0.5, 0.5])).unwrap();
        assert!((v - 0.130812).abs() < 5e-7);
    }

    #[test]
    fn kl_infinite_and_mismatch() {
        assert_eq!(kl_divergence(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(), f64::INFINITY);
        let other = Distribution::new(Alphabet::new(["a", "b"]).unwrap(), vec![0.5, 0.5]).unwrap();
        assert!(matches!(kl_divergence(&d(&[0.5, 0.5]), &other), Err(Error::Shape(_))));
    }

    #[test]
    fn mutual_information_examples() {
        let u = Distribution::<f64>::uniform(bin());
        let id = Kernel::identity(bin());
        assert!((mutual_information(&u, &id).unwrap() - 2f64.ln()).abs() < 1e-15);

        let c = d(&[0.3, 0.7]);
        let constant = Kernel::constant(bin(), &c);
        assert_eq!(mutual_information(&d(&[0.1, 0.9]), &constant).unwrap(), 0.0);

        // binary symmetric channel, flip 0.1, input [0.25, 0.75]
        let bsc = Kernel::from_rows(bin(), bin(), &[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let px = [0.25f64, 0.75];
        let m: [f64; 2] = [0.25 * 0.9 + 0.75 * 0.1, 0.25 * 0.1 + 0.75 * 0.9];
        let mut want = 0.0;
        for i in 0..2 {
            for o in 0..2 {
                let k = bsc.get(o, i);
                want += px[i] * k * (k / m[o]).ln();
            }
        }
        let got = mutual_information(&d(&px), &bsc).unwrap();
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }

    #[test]
    fn expected_kl_examples() {
        let ks = Kernel::from_rows(bin(), bin(), &[vec![0.9, 0.2], vec![0.1, 0.8]]).unwrap();
        let k = Kernel::from_rows(bin(), bin(), &[vec![0.6, 0.5], vec![0.4, 0.5]]).unwrap();
        let px = d(&[0.4, 0.6]);
        assert_eq!(expected_kl(&px, &ks, &ks).unwrap(), 0.0);

        let pm = Distribution::point_mass(bin(), 1).unwrap();
        let single = kl_divergence(&ks.column_dist(1), &k.column_dist(1)).unwrap();
        assert_eq!(expected_kl(&pm, &ks, &k).unwrap(), single);

        let mut want = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                want += px.get(x) * ks.get(y, x) * (ks.get(y, x) / k.get(y, x)).ln();
            }
        }
        assert!((expected_kl(&px, &ks, &k).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_uniform() {
        let u = Distribution::<f64>::uniform(Alphabet::indexed(8).unwrap());
        assert!((entropy(&u) - 8f64.ln()).abs() < 1e-14);
    }
}
