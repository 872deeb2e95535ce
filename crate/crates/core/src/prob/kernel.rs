use rand::Rng;

use super::distribution::{sample_index, total_variation};
use super::{Alphabet, Distribution};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Conditional distribution `p(out | in)` stored as a column-stochastic matrix.
///
/// Entry `(o, i)` is `p(out = o | in = i)`; column `i` is the conditional
/// distribution of the output given input symbol `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T> {
    input: Alphabet,
    output: Alphabet,
    mat: Mat<T>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(input: Alphabet, output: Alphabet, mat: Mat<T>) -> Result<Self> {
        if mat.rows() != output.len() || mat.cols() != input.len() {
            return Err(Error::shape(format!(
                "kernel matrix is {}x{} but alphabets are {} outputs x {} inputs",
                mat.rows(),
                mat.cols(),
                output.len(),
                input.len()
            )));
        }
        for c in 0..mat.cols() {
            let col = mat.col(c);
            if let Some(bad) = col.iter().find(|p| !p.is_finite() || **p < T::zero()) {
                return Err(Error::domain(format!("kernel column {c} has invalid entry {bad}")));
            }
            let s: T = col.iter().copied().sum();
            if (s - T::one()).abs() > T::prob_tol() {
                return Err(Error::domain(format!("kernel column {c} sums to {s}")));
            }
        }
        Ok(Kernel { input, output, mat })
    }

    /// Builds from row-major `matrix[o][i]`.
    pub fn from_rows(input: Alphabet, output: Alphabet, rows: &[Vec<T>]) -> Result<Self> {
        let mat = Mat::from_rows(rows).ok_or_else(|| Error::shape("ragged kernel matrix"))?;
        Self::new(input, output, mat)
    }

    pub(crate) fn from_parts(input: Alphabet, output: Alphabet, mat: Mat<T>) -> Self {
        debug_assert_eq!(mat.rows(), output.len());
        debug_assert_eq!(mat.cols(), input.len());
        Kernel { input, output, mat }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Kernel { input: alphabet.clone(), output: alphabet, mat: Mat::identity(n) }
    }

    /// Kernel whose every column equals `column`: the output ignores the input.
    pub fn constant(input: Alphabet, column: &Distribution<T>) -> Self {
        let p = column.probs();
        let mat = Mat::from_fn(p.len(), input.len(), |r, _| p[r]);
        Kernel { input, output: column.alphabet().clone(), mat }
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> Mat<T> {
        self.mat
    }

    pub fn get(&self, out: usize, inp: usize) -> T {
        self.mat[(out, inp)]
    }

    pub fn column(&self, inp: usize) -> &[T] {
        self.mat.col(inp)
    }

    pub fn column_dist(&self, inp: usize) -> Distribution<T> {
        Distribution::from_parts(self.output.clone(), self.mat.col(inp).to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.mat.to_rows()
    }

    pub fn is_square_over(&self, alphabet: &Alphabet) -> bool {
        &self.input == alphabet && &self.output == alphabet
    }

    /// Marginal of the output when the input is distributed as `input_dist`.
    pub fn pushforward(&self, input_dist: &Distribution<T>) -> Result<Distribution<T>> {
        if input_dist.alphabet() != &self.input {
            return Err(Error::shape("distribution alphabet differs from kernel input alphabet"));
        }
        Ok(Distribution::from_parts(self.output.clone(), self.mat.matvec(input_dist.probs())))
    }

    /// Composition in data-flow order: first `self`, then `next`.
    pub fn then(&self, next: &Kernel<T>) -> Result<Kernel<T>> {
        cascade(self, next)
    }

    pub fn sample<R: Rng + ?Sized>(&self, inp: usize, rng: &mut R) -> usize {
        sample_index(self.mat.col(inp), rng)
    }

    /// Largest total-variation distance between a column and `target`.
    pub fn max_column_tv(&self, target: &[T]) -> T {
        (0..self.mat.cols())
            .map(|c| total_variation(self.mat.col(c), target))
            .fold(T::zero(), T::max)
    }

    pub fn mean_diagonal(&self) -> T {
        let n = self.mat.rows().min(self.mat.cols());
        let s: T = (0..n).map(|i| self.mat[(i, i)]).sum();
        s / T::lit(n as f64)
    }

    pub fn max_abs_diff(&self, other: &Kernel<T>) -> T {
        self.mat.max_abs_diff(&other.mat)
    }
}

/// Kernel of running `first` and feeding its output to `second`.
pub fn cascade<T: Scalar>(first: &Kernel<T>, second: &Kernel<T>) -> Result<Kernel<T>> {
    if first.output != second.input {
        return Err(Error::shape("cascade: first output alphabet differs from second input alphabet"));
    }
    Ok(Kernel {
        input: first.input.clone(),
        output: second.output.clone(),
        mat: second.mat.matmul(&first.mat),
    })
}

/// Marginal of `k`'s output under `input_dist`.
pub fn pushforward<T: Scalar>(input_dist: &Distribution<T>, k: &Kernel<T>) -> Result<Distribution<T>> {
    k.pushforward(input_dist)
}

/// Hard-output model `f: X -> Y` given as an index map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicModel {
    input: Alphabet,
    output: Alphabet,
    map: Vec<usize>,
}

impl DeterministicModel {
    pub fn new(input: Alphabet, output: Alphabet, map: Vec<usize>) -> Result<Self> {
        if map.len() != input.len() {
            return Err(Error::shape(format!(
                "map has {} entries for {} inputs",
                map.len(),
                input.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= output.len()) {
            return Err(Error::domain(format!("mapped index {bad} outside output alphabet")));
        }
        Ok(DeterministicModel { input, output, map })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Pushforward of `px` through `f`: `r(y) = sum over x with f(x) = y of p(x)`.
    pub fn output_frequencies<T: Scalar>(&self, px: &Distribution<T>) -> Result<Distribution<T>> {
        if px.alphabet() != &self.input {
            return Err(Error::shape("distribution alphabet differs from model input alphabet"));
        }
        let mut r = vec![T::zero(); self.output.len()];
        for (x, &p) in px.probs().iter().enumerate() {
            r[self.map[x]] = r[self.map[x]] + p;
        }
        Ok(Distribution::from_parts(self.output.clone(), r))
    }
}

/// Column `i` is the point mass at `f(i)`.
pub fn one_hot_kernel<T: Scalar>(f: &DeterministicModel) -> Kernel<T> {
    let mat = Mat::from_fn(f.output.len(), f.input.len(), |r, c| {
        if f.map[c] == r {
            T::one()
        } else {
            T::zero()
        }
    });
    Kernel { input: f.input.clone(), output: f.output.clone(), mat }
}

/// If every column of `k` is a point mass, the function it encodes.
pub fn as_deterministic<T: Scalar>(k: &Kernel<T>) -> Option<DeterministicModel> {
    let map = (0..k.input.len())
        .map(|c| {
            let col = k.column(c);
            let hit = col.iter().position(|&p| p == T::one())?;
            col.iter().enumerate().all(|(r, &p)| r == hit || p == T::zero()).then_some(hit)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(DeterministicModel { input: k.input.clone(), output: k.output.clone(), map })
}
