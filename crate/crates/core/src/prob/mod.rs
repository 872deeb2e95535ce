//! Finite-alphabet probability substrate.

mod alphabet;
mod distribution;
pub mod info;
pub mod io;
mod kernel;

pub use alphabet::Alphabet;
pub use distribution::{normalize, Distribution};
pub(crate) use distribution::index_for_u;
pub use info::{entropy, expected_kl, kl_divergence, mutual_information};
pub use kernel::{as_deterministic, cascade, one_hot_kernel, pushforward, DeterministicModel, Kernel};

#[cfg(test)]
mod proptests;
