//! Closed forms for the two-level GenAI model: `p` uniform on `[0,1]`,
//! `g = ḡ` on the left half and `g̲` on the right, with `ḡ = 2 − g̲` and
//! `α = ½`.

use serde::{Deserialize, Serialize};

use crate::domain::{DensityField, Grid, MarketParams, DEFAULT_FLOOR};
use crate::error::{invalid, Error, Result};
use crate::mfe::{InteriorQuantities, Market};
use crate::numeric::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelConfig {
    pub g_low: f64,
    pub gamma: f64,
    /// Defaults to `1 − γ`.
    pub cost: f64,
}

impl TwoLevelConfig {
    pub fn new(g_low: f64, gamma: f64) -> Result<Self> {
        Self::with_cost(g_low, gamma, 1.0 - gamma)
    }

    pub fn with_cost(g_low: f64, gamma: f64, cost: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&g_low) {
            return invalid(format!("g_low must lie in [0,1], got {g_low}"));
        }
        MarketParams::new(0.5, gamma, cost)?;
        Ok(Self { g_low, gamma, cost })
    }

    pub fn g_high(&self) -> f64 {
        2.0 - self.g_low
    }

    pub fn params(&self) -> MarketParams {
        MarketParams { alpha: 0.5, gamma: self.gamma, cost: self.cost }
    }

    fn share(&self) -> f64 {
        1.0 - self.gamma
    }

    /// `(1-γ)/√g̲`, the top of the interior range.
    pub fn v_upper(&self) -> f64 {
        self.share() / self.g_low.sqrt()
    }

    /// Exact two-atom market.
    pub fn atoms_market(&self) -> Result<Market> {
        if self.g_low <= 0.0 {
            return invalid("g_low = 0 leaves the right half without GenAI mass");
        }
        Market::from_atoms(&[(0.5, self.g_high() / 2.0), (0.5, self.g_low / 2.0)], self.params())
    }

    /// Piecewise-constant densities on an `n`-cell grid over `[0,1]`; `n`
    /// must be even so no cell straddles `½`.
    pub fn grid_market(&self, n_cells: usize) -> Result<Market> {
        if !n_cells.is_multiple_of(2) {
            return invalid(format!("grid needs an even cell count, got {n_cells}"));
        }
        let grid = Grid::new(0.0, 1.0, n_cells)?;
        let p = DensityField::from_fn(grid, DEFAULT_FLOOR, |_| 1.0)?;
        let (hi, lo) = (self.g_high(), self.g_low);
        let g = DensityField::from_fn(grid, DEFAULT_FLOOR, |x| if x < 0.5 { hi } else { lo })?;
        Market::from_densities(&p, &g, self.params())
    }

    fn check_interior(&self, v_bar: f64) -> Result<()> {
        if !(v_bar > self.share() && v_bar < self.v_upper()) {
            return Err(Error::NotAdmissible {
                v_bar,
                reason: format!("two-level closed forms need 1-gamma < v_bar < {}", self.v_upper()),
            });
        }
        Ok(())
    }

    /// `√(2 − ((1-γ)/v̄)²)`
    fn root_term(&self, v_bar: f64) -> f64 {
        let u = self.share() / v_bar;
        (2.0 - u * u).sqrt()
    }
}

pub fn twolevel_rbar(cfg: &TwoLevelConfig, v_bar: f64) -> Result<f64> {
    cfg.check_interior(v_bar)?;
    let u = v_bar / cfg.share();
    Ok((2.0 * u * u - 1.0) / cfg.g_high())
}

pub fn twolevel_quantities(cfg: &TwoLevelConfig, v_bar: f64) -> Result<InteriorQuantities> {
    let r_bar = twolevel_rbar(cfg, v_bar)?;
    let s = cfg.share();
    let k = (s / v_bar).powi(2);
    let v_tilde = s / cfg.root_term(v_bar) + cfg.cost * cfg.g_low / cfg.g_high();
    Ok(InteriorQuantities {
        v_bar,
        r_bar,
        m_g: cfg.g_high().sqrt() / 2.0,
        m_p: 0.5 * k,
        v_tilde,
        w_implied: v_tilde + cfg.cost - v_bar,
        g_ai: cfg.g_high() / 2.0,
        p_in: 0.5,
        k,
    })
}

/// Right side of the no-compensation level equation.
fn v0_rhs(cfg: &TwoLevelConfig, v: f64) -> f64 {
    cfg.share() / cfg.root_term(v) + 2.0 * cfg.cost / cfg.g_high()
}

/// Gap between the two sides of the pure-AI condition; positive when an
/// uncompensated creator at the sparse half still beats a GenAI draw.
fn pure_ai_margin(g: f64, share: f64, cost: f64) -> f64 {
    share / g.sqrt() - share * (g.sqrt() + (2.0 - g).sqrt()) / 2.0 - cost
}

pub fn twolevel_v0(cfg: &TwoLevelConfig) -> Result<f64> {
    if cfg.g_low <= 0.0 || pure_ai_margin(cfg.g_low, cfg.share(), cfg.cost) <= 0.0 {
        return invalid(format!("no indifference level at g_low = {}: GenAI alone is an equilibrium", cfg.g_low));
    }
    let lo = cfg.share() * (1.0 + 1e-15);
    let hi = cfg.v_upper();
    bisect(|v| v0_rhs(cfg, v) - v, lo, hi, 1e-15)
}

/// Residual `|v − rhs(v)|` of the no-compensation level equation.
pub fn twolevel_v0_residual(cfg: &TwoLevelConfig, v: f64) -> f64 {
    (v - v0_rhs(cfg, v)).abs()
}

/// Largest `g̲` for which manual creation survives without compensation.
pub fn twolevel_gstar(params: &MarketParams) -> Result<f64> {
    let (s, c) = (params.share(), params.cost);
    bisect(|g| pure_ai_margin(g, s, c), 1e-12, 1.0, 1e-14)
}

/// Both sides of the pure-AI condition at `g`, left minus right.
pub fn twolevel_gstar_residual(params: &MarketParams, g: f64) -> f64 {
    pure_ai_margin(g, params.share(), params.cost)
}

/// Smallest bonus that moves the market off pure GenAI.
pub fn twolevel_wmin(cfg: &TwoLevelConfig) -> f64 {
    let s = cfg.share();
    s / cfg.g_high().sqrt() - s / cfg.g_low.sqrt() + 2.0 * cfg.cost / cfg.g_high()
}

/// `(R, Π)` at an interior threshold.
pub fn twolevel_profit(cfg: &TwoLevelConfig, v_bar: f64) -> Result<(f64, f64)> {
    cfg.check_interior(v_bar)?;
    let (s, gamma) = (cfg.share(), cfg.gamma);
    let u = s / v_bar;
    let root = cfg.root_term(v_bar);
    let revenue = gamma / 2.0 * u + gamma / 2.0 * root;
    let profit = 0.5 * u + 0.5 * root - s / root - cfg.cost / cfg.g_high() * u * u;
    Ok((revenue, profit))
}
