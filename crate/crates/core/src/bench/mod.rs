//! Baselines, tradeoff sweeps and sampling-based evaluation.

mod csv;
mod dirichlet;
mod estimate;
mod monte_carlo;
mod quantize;
mod sweep;
pub mod synthetic;

pub use csv::{emit_benchmark_csv, emit_curve_csv, format_g6, parse_benchmark_csv, parse_curve_csv, BENCHMARK_HEADER, CURVE_HEADER};
pub use dirichlet::{dirichlet_baseline, dirichlet_kernel, BenchmarkRow, DirichletSpec};
pub use estimate::{estimate_r, estimate_r_labels};
pub use monte_carlo::{monte_carlo_agreement, surrogate_extraction};
pub use quantize::{quantize, quantize_all, QuantizerConfig};
pub use sweep::{exact_metrics, sweep, ExactMetrics, Mode, SweepControls, TradeoffCurve, TradeoffPoint};

#[cfg(test)]
mod proptests;
