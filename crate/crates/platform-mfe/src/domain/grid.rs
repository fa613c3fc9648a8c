use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniform 1-D grid of `n_cells` cells on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    lo: f64,
    hi: f64,
    n_cells: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n_cells: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return invalid("grid bounds must be finite");
        }
        if hi <= lo {
            return invalid(format!("grid needs hi > lo, got [{lo}, {hi}]"));
        }
        if n_cells < 2 {
            return invalid(format!("grid needs at least 2 cells, got {n_cells}"));
        }
        Ok(Self { lo, hi, n_cells })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Cell width.
    pub fn dx(&self) -> f64 {
        (self.hi - self.lo) / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Index of the cell containing `x`; points outside are clamped to the
    /// end cells.
    pub fn cell_of(&self, x: f64) -> usize {
        let k = ((x - self.lo) / self.dx()).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_cells - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_grid_centers() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert_eq!(g.centers(), vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn symmetric_grid_width() {
        let g = Grid::new(-4.0, 4.0, 100).unwrap();
        assert!((g.dx() - 0.08).abs() < 1e-15);
    }

    #[test]
    fn rejects_single_cell() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 4).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn cell_lookup_clamps() {
        let g = Grid::new(-4.0, 4.0, 100).unwrap();
        assert_eq!(g.cell_of(-4.0), 0);
        assert_eq!(g.cell_of(4.0), 99);
        assert_eq!(g.cell_of(-10.0), 0);
        assert_eq!(g.cell_of(0.0), 50);
        assert_eq!(g.cell_of(-0.01), 49);
    }
}
