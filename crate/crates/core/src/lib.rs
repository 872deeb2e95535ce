//! Optimal information laundering over finite alphabets.
//!
//! A private model `K*` is wrapped by an input kernel `K1` and an output
//! kernel `K2`, chosen to keep the released cascade close to `K*` while
//! limiting the mutual information carried through either interface.
//! Everything is generic over the scalar type; the aliases below fix `f64`.

pub mod bench;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod prob;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DistributionF64 = prob::Distribution<f64>;
pub type KernelF64 = prob::Kernel<f64>;
pub type OilSolutionF64 = engine::OilSolution<f64>;
pub type DistributionF32 = prob::Distribution<f32>;
pub type KernelF32 = prob::Kernel<f32>;
pub type OilSolutionF32 = engine::OilSolution<f32>;
