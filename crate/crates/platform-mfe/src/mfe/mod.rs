//! Equilibrium machinery for revenue-threshold and location-based schemes.
//!
//! Everything works on a [`Market`]: per-cell masses of `p` and `g` plus
//! the merged ratio distribution. A grid-backed market has one cell per
//! grid cell; an atom market has one cell per atom with unit width, which
//! makes the two-level example exact.

mod classify;
mod equilibrium;
mod interior;
mod optimize;
mod profit;
mod rbar;
mod v0;
mod verify;
mod xbased;

use std::sync::OnceLock;

use crate::domain::{DensityField, Grid, MarketParams, RatioDistribution};
use crate::error::{Error, Result};

pub use classify::{classify_scheme, ClassifyOptions};
pub use equilibrium::{build_equilibrium, Classification, EquilibriumSolution, EquilibriumState, Region};
pub use interior::{interior_quantities, InteriorQuantities};
pub use optimize::{optimize_vstar, Optimum};
pub use profit::{default_sweep, profit_at, profit_curve, CurvePoint, ProfitReport, Regime};
pub use rbar::solve_rbar;
pub use v0::{discontinuity_gap, solve_v0};
pub use verify::{verify_equilibrium, xbased_equivalent, Residuals};
pub use xbased::{solve_xbased, CompensationRule, FixedPointOptions, FixedPointResult};

#[derive(Debug, Clone)]
pub struct Market {
    params: MarketParams,
    grid: Option<Grid>,
    p: Vec<f64>,
    g: Vec<f64>,
    r: Vec<f64>,
    rd: RatioDistribution,
    v0: OnceLock<Option<f64>>,
}

impl Market {
    pub fn from_densities(p: &DensityField, g: &DensityField, params: MarketParams) -> Result<Self> {
        params.validate()?;
        let rd = RatioDistribution::from_densities(p, g)?;
        Ok(Self::assemble(params, Some(*p.grid()), p.masses(), g.masses(), rd))
    }

    /// One cell per `(p_mass, g_mass)` atom; masses are renormalized.
    pub fn from_atoms(atoms: &[(f64, f64)], params: MarketParams) -> Result<Self> {
        params.validate()?;
        let rd = RatioDistribution::from_atoms(atoms)?;
        let sp: f64 = atoms.iter().map(|a| a.0).sum();
        let sg: f64 = atoms.iter().map(|a| a.1).sum();
        let p = atoms.iter().map(|a| a.0 / sp).collect();
        let g = atoms.iter().map(|a| a.1 / sg).collect();
        Ok(Self::assemble(params, None, p, g, rd))
    }

    fn assemble(params: MarketParams, grid: Option<Grid>, p: Vec<f64>, g: Vec<f64>, rd: RatioDistribution) -> Self {
        let r = rd.cell_entry().iter().map(|&e| rd.entries()[e].r).collect();
        Self { params, grid, p, g, r, rd, v0: OnceLock::new() }
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    pub fn ratio_distribution(&self) -> &RatioDistribution {
        &self.rd
    }

    pub fn n_cells(&self) -> usize {
        self.p.len()
    }

    pub fn p_mass(&self) -> &[f64] {
        &self.p
    }

    pub fn g_mass(&self) -> &[f64] {
        &self.g
    }

    /// Per-cell ratio `p/g` (the merged entry value).
    pub fn ratio(&self) -> &[f64] {
        &self.r
    }

    /// Cell width, or 1 for atom markets.
    pub fn dx(&self) -> f64 {
        self.grid.map_or(1.0, |g| g.dx())
    }

    pub fn heights(&self, masses: &[f64]) -> Vec<f64> {
        let dx = self.dx();
        masses.iter().map(|m| m / dx).collect()
    }

    /// `(1-gamma) r_max^alpha`: the largest raw revenue any creator can get
    /// when all content comes from GenAI.
    pub fn pure_ai_ceiling(&self) -> f64 {
        self.params.share() * self.rd.r_max().powf(self.params.alpha)
    }

    /// `(1-gamma) E_g[r^alpha] + c`.
    pub fn genai_value_plus_cost(&self) -> f64 {
        self.params.share() * self.rd.e_g_r_alpha(self.params.alpha) + self.params.cost
    }

    /// Cached no-compensation indifference level.
    pub fn v0(&self) -> Option<f64> {
        *self.v0.get_or_init(|| solve_v0(self))
    }

    pub(crate) fn check_cells(&self, n: usize, what: &str) -> Result<()> {
        if n != self.n_cells() {
            return Err(Error::GridMismatch(format!("{what}: {n} values for {} cells", self.n_cells())));
        }
        Ok(())
    }
}
