//! Mean-field equilibria of a content platform where creators either make
//! content by hand or draw it from a generative model, and the platform
//! pays a flat bonus to content whose revenue clears a threshold.
//!
//! - [`domain`]: grids, densities, the ratio `r = p/g`, parameters and schemes.
//! - [`market`]: revenue and profit functionals, the market before GenAI.
//! - [`mfe`]: threshold solving, equilibrium construction, classification,
//!   profit curves, the optimizer and the fixed-point solver.
//! - [`twolevel`]: closed forms for the two-level GenAI market.
//! - [`sim`]: finite-population simulation and the retraining loop.
//! - [`io`], [`cli`]: files and the `platform-mfe` binary.
//!
//! ```
//! use platform_mfe::twolevel::TwoLevelConfig;
//! use platform_mfe::mfe::profit_at;
//!
//! let market = TwoLevelConfig::new(0.2, 0.85).unwrap().atoms_market().unwrap();
//! let report = profit_at(&market, 0.16).unwrap();
//! assert!((report.profit - 0.78324887).abs() < 1e-8);
//! ```
//!
//! Runnable examples live in `examples/`, one per capability.

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod domain;
pub mod error;
pub mod io;
pub mod market;
pub mod mfe;
pub mod numeric;
pub mod sim;
pub mod twolevel;

pub use error::{Error, Result};
