use serde::{Deserialize, Serialize};

use super::Grid;
use crate::error::{invalid, Error, Result};
use crate::numeric::ksum;

pub const DEFAULT_FLOOR: f64 = 1e-9;

/// Piecewise-constant density on a [`Grid`]; `values` are heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityField {
    grid: Grid,
    values: Vec<f64>,
    #[serde(default = "default_floor")]
    floor: f64,
}

fn default_floor() -> f64 {
    DEFAULT_FLOOR
}

impl DensityField {
    /// Clamp below at `floor`, then rescale to unit mass.
    pub fn from_values(grid: Grid, raw: &[f64], floor: f64) -> Result<Self> {
        if raw.len() != grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} cells",
                raw.len(),
                grid.n_cells()
            )));
        }
        if !(floor > 0.0) || !floor.is_finite() {
            return invalid(format!("floor must be positive, got {floor}"));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return invalid("density values must be finite");
        }
        if raw.iter().all(|&v| v <= 0.0) {
            return invalid("density is identically zero");
        }
        let clamped: Vec<f64> = raw.iter().map(|&v| v.max(floor)).collect();
        let mass = ksum(clamped.iter().map(|v| v * grid.dx()));
        let values = clamped.into_iter().map(|v| v / mass).collect();
        Ok(Self { grid, values, floor })
    }

    /// Evaluate `f` at cell centers and normalize.
    pub fn from_fn(grid: Grid, floor: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let raw: Vec<f64> = grid.centers().into_iter().map(f).collect();
        Self::from_values(grid, &raw, floor)
    }

    /// Heights taken as-is: every value must be positive and finite. No
    /// rescaling, so the result need not integrate to one.
    pub fn from_heights(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} cells",
                values.len(),
                grid.n_cells()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return invalid("heights must be positive and finite");
        }
        let floor = values.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Self { grid, values, floor })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Per-cell masses `value * dx`.
    pub fn masses(&self) -> Vec<f64> {
        let dx = self.grid.dx();
        self.values.iter().map(|v| v * dx).collect()
    }

    pub fn total_mass(&self) -> f64 {
        ksum(self.masses())
    }

    pub(crate) fn same_grid(&self, other: &DensityField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }
}
