//! Temporal network-evolution analytics for year-stamped infrastructure records.
//!
//! The pipeline reads node and edge records with commissioning and
//! decommissioning years ([`ingest`]), materializes one simple graph per
//! calendar year, and computes structural metrics ([`metrics`],
//! [`community`]), loop and star motif shares ([`motifs`]), lifetime and
//! change-rate statistics ([`temporal`]), and reference-graph ensembles
//! ([`baselines`]).

pub mod baselines;
pub mod community;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod motifs;
pub mod synthetic;
pub mod temporal;

pub use error::ParameterError;
pub use graph::{AnnualSnapshot, Graph};
pub use ingest::{AssetRecordSet, IngestError};
pub use metrics::{MetricPanel, MetricRow, MetricValue, UndefinedMetric};

/// Toolkit version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
