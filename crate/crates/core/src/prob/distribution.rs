use rand::Rng;

use super::Alphabet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    alphabet: Alphabet,
    probs: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    /// Validates non-negativity and the sum-to-one invariant.
    pub fn new(alphabet: Alphabet, probs: Vec<T>) -> Result<Self> {
        check_len(&alphabet, probs.len())?;
        check_entries(&probs)?;
        let s: T = probs.iter().copied().sum();
        if (s - T::one()).abs() > T::prob_tol() {
            return Err(Error::domain(format!("probabilities sum to {s}, expected 1")));
        }
        Ok(Distribution { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        let p = T::one() / T::lit(n as f64);
        Distribution { alphabet, probs: vec![p; n] }
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Result<Self> {
        if index >= alphabet.len() {
            return Err(Error::shape(format!("index {index} outside alphabet of size {}", alphabet.len())));
        }
        let mut probs = vec![T::zero(); alphabet.len()];
        probs[index] = T::one();
        Ok(Distribution { alphabet, probs })
    }

    /// Skips validation; callers guarantee a probability vector of the right length.
    pub(crate) fn from_parts(alphabet: Alphabet, probs: Vec<T>) -> Self {
        debug_assert_eq!(alphabet.len(), probs.len());
        Distribution { alphabet, probs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> T {
        self.probs[i]
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    /// Draws a symbol index by inverting the cumulative distribution.
    ///
    /// Consumes exactly one uniform variate from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.probs, rng)
    }

    /// Total variation distance `0.5 * sum |p - q|`.
    pub fn total_variation(&self, other: &Self) -> Result<T> {
        if self.alphabet != other.alphabet {
            return Err(Error::shape("total variation between different alphabets"));
        }
        Ok(total_variation(&self.probs, &other.probs))
    }
}

/// Rescales non-negative weights to a distribution.
pub fn normalize<T: Scalar>(weights: &[T], alphabet: Alphabet) -> Result<Distribution<T>> {
    check_len(&alphabet, weights.len())?;
    check_entries(weights)?;
    let s: T = weights.iter().copied().sum();
    if s <= T::zero() {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    Ok(Distribution { alphabet, probs: weights.iter().map(|&w| w / s).collect() })
}

pub(crate) fn sample_index<T: Scalar, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    index_for_u(probs, rng.random())
}

/// Inverse-CDF lookup of a uniform draw `u` in `[0, 1)`.
pub(crate) fn index_for_u<T: Scalar>(probs: &[T], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, p) in probs.iter().enumerate() {
        let p = p.as_f64();
        if p > 0.0 {
            last_positive = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap above the accumulated mass
    last_positive
}

pub(crate) fn total_variation<T: Scalar>(p: &[T], q: &[T]) -> T {
    let s: T = p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum();
    s * T::lit(0.5)
}

fn check_len(alphabet: &Alphabet, n: usize) -> Result<()> {
    if n != alphabet.len() {
        return Err(Error::shape(format!(
            "{n} probabilities for an alphabet of size {}",
            alphabet.len()
        )));
    }
    Ok(())
}

fn check_entries<T: Scalar>(v: &[T]) -> Result<()> {
    for (i, &p) in v.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::domain(format!("entry {i} is not finite")));
        }
        if p < T::zero() {
            return Err(Error::domain(format!("entry {i} is negative ({p})")));
        }
    }
    Ok(())
}
