//! Uninformed, probabilistic and heuristic flooding on random graphs.
//!
//! The crate simulates flooding on Erdős–Rényi and configuration-model graphs
//! and predicts three ratios against uninformed flooding with generating
//! functions:
//!
//! * `P_n`, the fraction of the giant component reached,
//! * `P_m`, the fraction of messages sent,
//! * `P_t`, the ratio of average waiting times.
//!
//! ```
//! use flood_core::{analytics, DegreeModel, FloodRule};
//!
//! let model = DegreeModel::poisson(10.0, 9999)?;
//! let pn = analytics::predict_pn(&model, FloodRule::heuristic(0.95)?)?;
//! assert!((pn - 0.94).abs() < 0.015);
//! # Ok::<(), flood_core::FloodError>(())
//! ```

pub mod analytics;
pub mod degree;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod rule;
pub mod seed;
pub mod sim;

pub use analytics::{DigraphAnalysis, GccAnalysis, Prediction, WaitingPrediction};
pub use degree::{DegreeKind, DegreeModel};
pub use error::{FloodError, Result};
pub use experiment::{ModelFamily, OutputFormat, SweepConfig, SweepRow};
pub use graph::{ComponentLabeling, Graph};
pub use rule::FloodRule;
pub use sim::{BatchStats, Estimate, FloodOutcome};
