use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::domain::{DensityField, Grid, DEFAULT_FLOOR};
use crate::error::{invalid, Result};

/// How a generative model is fitted from samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelKnobs {
    pub bandwidth: f64,
    /// Kernel centers are pulled toward the sample mean, `m + λ(x − m)`;
    /// `1` keeps the samples as they are.
    pub shrink: f64,
    /// Number of training samples; for refits, the number of contents kept.
    pub train_samples: usize,
}

/// Gaussian kernel density estimate standing in for a trained generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerativeModel {
    centers: Vec<f64>,
    bandwidth: f64,
    clip_lo: f64,
    clip_hi: f64,
}

impl GenerativeModel {
    pub fn fit(samples: &[f64], bandwidth: f64, shrink: f64, clip: (f64, f64)) -> Result<Self> {
        if samples.len() < 2 {
            return invalid(format!("need at least 2 training samples, got {}", samples.len()));
        }
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return invalid(format!("bandwidth must be positive, got {bandwidth}"));
        }
        if !(shrink > 0.0 && shrink <= 1.0) {
            return invalid(format!("shrink must lie in (0,1], got {shrink}"));
        }
        let m = samples.iter().sum::<f64>() / samples.len() as f64;
        let centers = samples.iter().map(|x| m + shrink * (x - m)).collect();
        Ok(Self { centers, bandwidth, clip_lo: clip.0, clip_hi: clip.1 })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn n_centers(&self) -> usize {
        self.centers.len()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let c = self.centers[rng.random_range(0..self.centers.len())];
        let z: f64 = StandardNormal.sample(rng);
        (c + self.bandwidth * z).clamp(self.clip_lo, self.clip_hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    /// Clipped model mass per cell as a floored, normalized density.
    pub fn density_on(&self, grid: &Grid) -> Result<DensityField> {
        let n = grid.n_cells();
        let inner: Vec<f64> = (1..n).map(|i| grid.lo() + grid.dx() * i as f64).collect();
        let mut cdf = vec![0.0; n - 1];
        let unit = Normal::new(0.0, 1.0).expect("unit normal");
        for &c in &self.centers {
            for (acc, &e) in cdf.iter_mut().zip(&inner) {
                *acc += unit.cdf((e - c) / self.bandwidth);
            }
        }
        let k = self.centers.len() as f64;
        let mut masses = Vec::with_capacity(n);
        let mut prev = 0.0;
        for v in cdf {
            masses.push(v / k - prev);
            prev = v / k;
        }
        masses.push(1.0 - prev);
        let heights: Vec<f64> = masses.iter().map(|m| m.max(0.0) / grid.dx()).collect();
        DensityField::from_values(*grid, &heights, DEFAULT_FLOOR)
    }
}

/// Silverman's rule of thumb.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = p * (n - 1.0);
        let (i, f) = (h.floor() as usize, h.fract());
        sorted[i] + f * (sorted[(i + 1).min(sorted.len() - 1)] - sorted[i])
    };
    let iqr = q(0.75) - q(0.25);
    0.9 * sd.min(iqr / 1.34) * n.powf(-0.2)
}
