//! Finite-population simulation: binned Cobb-Douglas matching, creators
//! choosing between manual work and GenAI draws, and a retraining loop
//! across periods.

mod kde;
mod metrics;
mod mixture;
mod multiperiod;
mod period;

pub use kde::{silverman_bandwidth, GenerativeModel, ModelKnobs};
pub use metrics::{bin_revenue, collapse_metrics, histogram, tv_distance, CollapseMetrics};
pub use mixture::{Component, MixtureSpec};
pub use multiperiod::{run_multiperiod, MultiPeriodConfig, PeriodSummary};
pub use period::{run_period, run_schemes, AbmConfig, PeriodRecord};
