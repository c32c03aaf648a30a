//! Byte-wise CRC update networks over GF(2), a cycle-level simulator for
//! running them on an 8x8 reconfigurable XOR array, and a throughput report.

pub mod error;
pub mod gf2;
pub mod morphosim;
pub mod perf;

pub use error::{Error, Result};

/// Metrics in exact rational arithmetic.
pub type ExactMetrics = perf::MetricsRow<num_rational::Rational64>;
/// Metrics in double precision.
pub type FloatMetrics = perf::MetricsRow<f64>;
/// Simulator state with eight bit-sliced channels per cell.
pub type PackedMachine = morphosim::MachineState<u8>;
/// Simulator state carrying symbolic GF(2) expressions.
pub type SymbolicMachine = morphosim::MachineState<gf2::network::LinearForm>;
