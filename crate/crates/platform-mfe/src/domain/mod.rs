//! Grid, densities, the ratio distribution and model parameters.

mod density;
mod grid;
mod params;
mod ratio;

pub use density::{DensityField, DEFAULT_FLOOR};
pub use grid::Grid;
pub use params::{MarketParams, RevenueThresholdScheme, XBasedScheme};
pub use ratio::{RatioDistribution, RatioEntry, MERGE_DIGITS};
