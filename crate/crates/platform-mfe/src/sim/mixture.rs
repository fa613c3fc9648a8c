use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as NormalCdf};

use crate::domain::Grid;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    /// Standard deviation.
    pub scale: f64,
}

/// Clipped Gaussian mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<Component>,
    pub clip_lo: f64,
    pub clip_hi: f64,
}

impl Default for MixtureSpec {
    /// `0.4 N(-2, 0.5²) + 0.6 N(2, 0.5²)` clipped to `[-4, 4]`.
    fn default() -> Self {
        Self {
            components: vec![
                Component { weight: 0.4, mean: -2.0, scale: 0.5 },
                Component { weight: 0.6, mean: 2.0, scale: 0.5 },
            ],
            clip_lo: -4.0,
            clip_hi: 4.0,
        }
    }
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return invalid("mixture needs at least one component");
        }
        if self.components.iter().any(|c| !(c.weight >= 0.0) || !(c.scale > 0.0) || !c.mean.is_finite()) {
            return invalid("mixture weights must be nonnegative and scales positive");
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return invalid(format!("mixture weights sum to {total}, not 1"));
        }
        if !(self.clip_lo <= self.clip_hi) {
            return invalid("clip_lo must not exceed clip_hi");
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let normals: Vec<Normal<f64>> =
            self.components.iter().map(|c| Normal::new(c.mean, c.scale).expect("validated scale")).collect();
        (0..n)
            .map(|_| {
                let mut u: f64 = rng.random();
                let mut k = 0;
                while k + 1 < self.components.len() && u >= self.components[k].weight {
                    u -= self.components[k].weight;
                    k += 1;
                }
                normals[k].sample(rng).clamp(self.clip_lo, self.clip_hi)
            })
            .collect()
    }

    /// Unclipped mixture mean.
    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.mean).sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * NormalCdf::new(c.mean, c.scale).expect("validated scale").cdf(x))
            .sum()
    }

    /// Mass per cell after clipping; the tails land in the end cells.
    pub fn cell_masses(&self, grid: &Grid) -> Vec<f64> {
        let n = grid.n_cells();
        let edges: Vec<f64> = (0..=n).map(|i| grid.lo() + grid.dx() * i as f64).collect();
        (0..n)
            .map(|i| {
                let a = if i == 0 { 0.0 } else { self.cdf(edges[i]) };
                let b = if i + 1 == n { 1.0 } else { self.cdf(edges[i + 1]) };
                b - a
            })
            .collect()
    }
}
