use serde::{Deserialize, Serialize};

use super::Grid;
use crate::error::{invalid, Error, Result};

/// Matching elasticity, platform commission and manual production cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub alpha: f64,
    pub gamma: f64,
    pub cost: f64,
}

impl MarketParams {
    pub fn new(alpha: f64, gamma: f64, cost: f64) -> Result<Self> {
        let p = Self { alpha, gamma, cost };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return invalid(format!("alpha must lie in (0,1), got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return invalid(format!("gamma must lie in [0,1], got {}", self.gamma));
        }
        if !(self.cost > 0.0) || !self.cost.is_finite() {
            return invalid(format!("cost must be positive, got {}", self.cost));
        }
        Ok(())
    }

    /// Creator share `1 - gamma`.
    pub fn share(&self) -> f64 {
        1.0 - self.gamma
    }
}

/// Flat bonus `w` paid to content whose raw revenue reaches `v_bar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevenueThresholdScheme {
    pub v_bar: f64,
    pub w: f64,
}

impl RevenueThresholdScheme {
    pub fn new(v_bar: f64, w: f64) -> Result<Self> {
        if !(v_bar >= 0.0) || !v_bar.is_finite() {
            return invalid(format!("v_bar must be nonnegative, got {v_bar}"));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return invalid(format!("w must be nonnegative, got {w}"));
        }
        Ok(Self { v_bar, w })
    }

    /// Bonus owed to content with raw revenue `v`. Ties are paid.
    pub fn bonus(&self, v: f64) -> f64 {
        if v >= self.v_bar {
            self.w
        } else {
            0.0
        }
    }
}

/// Location-dependent compensation `W(x_i)`, one value per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XBasedScheme {
    pub grid: Option<Grid>,
    pub values: Vec<f64>,
}

impl XBasedScheme {
    pub fn new(grid: Option<Grid>, values: Vec<f64>) -> Result<Self> {
        if let Some(g) = grid {
            if g.n_cells() != values.len() {
                return Err(Error::GridMismatch(format!(
                    "{} values for {} cells",
                    values.len(),
                    g.n_cells()
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return invalid("compensation values must be finite and nonnegative");
        }
        Ok(Self { grid, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_bounds() {
        assert!(MarketParams::new(0.5, 0.85, 0.15).is_ok());
        assert!(MarketParams::new(1.0, 0.85, 0.15).is_err());
        assert!(MarketParams::new(0.5, 1.2, 0.15).is_err());
        assert!(MarketParams::new(0.5, 0.85, 0.0).is_err());
        assert!(MarketParams::new(0.5, 0.85, -1.0).is_err());
    }

    #[test]
    fn bonus_pays_ties() {
        let s = RevenueThresholdScheme::new(0.16, 0.1).unwrap();
        assert_eq!(s.bonus(0.16), 0.1);
        assert_eq!(s.bonus(0.1599), 0.0);
        assert!(RevenueThresholdScheme::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn xbased_rejects_negative() {
        assert!(XBasedScheme::new(None, vec![0.0, -1.0]).is_err());
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert!(XBasedScheme::new(Some(g), vec![0.0; 2]).is_err());
    }
}
