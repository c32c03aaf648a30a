//! Throughput metrics, the published comparison figures, and a report that
//! recomputes each figure and flags the ones that do not reproduce.

pub mod metrics;
pub mod reference;
pub mod report;
pub mod scalar;

pub use metrics::{compute_metrics, speedup, MetricsRow, SystemProfile};
pub use reference::{Algorithm, ComparisonRow, FpgaRow, MeasuredCycles, ReferenceDataset, System};
pub use report::{build_report, render_report, CellStatus, Report, ReportCell, ReportFormat, Tolerance};
pub use scalar::Scalar;
