use crate::prob::{Alphabet, Distribution, Kernel};
use crate::scalar::Scalar;

/// Limit of vanishing leakage weight: nothing is perturbed.
pub fn beta_zero_kernel<T: Scalar>(alphabet: Alphabet) -> Kernel<T> {
    Kernel::identity(alphabet)
}

/// Limit of unbounded leakage weight: the output ignores the input and is
/// drawn from `marginal`.
pub fn beta_infinity_kernel<T: Scalar>(marginal: &Distribution<T>) -> Kernel<T> {
    Kernel::constant(marginal.alphabet().clone(), marginal)
}
