use serde::{Deserialize, Serialize};

use super::MixtureSpec;
use crate::domain::Grid;

/// Cobb-Douglas bin revenue `√(n_c n_k)`.
pub fn bin_revenue(n_consumers: f64, n_contents: f64) -> f64 {
    (n_consumers * n_contents).sqrt()
}

pub fn histogram(xs: &[f64], grid: &Grid) -> Vec<usize> {
    let mut h = vec![0; grid.n_cells()];
    for &x in xs {
        h[grid.cell_of(x)] += 1;
    }
    h
}

/// Total variation between two mass vectors.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseMetrics {
    /// Share with `|x| < 1`.
    pub central_mass: f64,
    /// Share within 1 of either mode at `±2`.
    pub modal_mass: f64,
    pub std: f64,
    /// TV between the binned samples and the binned mixture.
    pub tv_to_p: f64,
}

pub fn collapse_metrics(xs: &[f64], spec: &MixtureSpec, n_bins: usize) -> CollapseMetrics {
    let n = xs.len() as f64;
    let central = xs.iter().filter(|x| x.abs() < 1.0).count() as f64 / n;
    let modal = xs.iter().filter(|x| (**x - 2.0).abs() < 1.0 || (**x + 2.0).abs() < 1.0).count() as f64 / n;
    let mean = xs.iter().sum::<f64>() / n;
    let std = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    let grid = Grid::new(spec.clip_lo, spec.clip_hi, n_bins).expect("clip range spans the bins");
    let h: Vec<f64> = histogram(xs, &grid).into_iter().map(|c| c as f64 / n).collect();
    CollapseMetrics { central_mass: central, modal_mass: modal, std, tv_to_p: tv_distance(&h, &spec.cell_masses(&grid)) }
}
