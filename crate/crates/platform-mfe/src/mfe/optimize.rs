use serde::{Deserialize, Serialize};

use super::{profit_at, Market, ProfitReport, Regime};
use crate::error::{invalid, Result};
use crate::numeric::golden_max;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub v_star: f64,
    pub w_star: f64,
    pub revenue: f64,
    pub profit: f64,
    pub regime: Regime,
    /// Best profit among interior thresholds, if any were admissible.
    pub best_interior_profit: Option<f64>,
    /// Profit of paying nothing.
    pub no_compensation_profit: f64,
}

/// Profit-maximizing threshold. Scans `grid_points` log-spaced offsets
/// above `1-γ`, refines the best bracket by golden section and compares
/// against paying nothing.
pub fn optimize_vstar(market: &Market, grid_points: usize) -> Result<Optimum> {
    if grid_points < 32 {
        return invalid(format!("need at least 32 grid points, got {grid_points}"));
    }
    let share = market.params().share();
    let (upper, baseline) = match market.v0() {
        Some(v0) => (v0, profit_at(market, v0)?),
        None => {
            let s = market.pure_ai_ceiling();
            (s, profit_at(market, s)?)
        }
    };
    let span = upper - share;
    // offsets from 1e-9 to just under the full span
    let lo_exp = -9.0f64;
    let hi_exp = (1.0 - 1e-9f64).log10();
    let xs: Vec<f64> = (0..grid_points)
        .map(|i| {
            let e = lo_exp + (hi_exp - lo_exp) * i as f64 / (grid_points - 1) as f64;
            share + span * 10f64.powf(e)
        })
        .collect();
    let eval = |v: f64| profit_at(market, v).ok().filter(|r| r.regime == Regime::Interior);
    let ys: Vec<Option<ProfitReport>> = xs.iter().map(|&v| eval(v)).collect();

    let best_idx = ys
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r.profit)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i);

    let mut best_interior = None;
    if let Some(i) = best_idx {
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(xs.len() - 1)];
        let f = |v: f64| eval(v).map_or(f64::NEG_INFINITY, |r| r.profit);
        let (v, _) = golden_max(f, a, b, 1e-13 * upper);
        let refined = eval(v).filter(|r| r.profit >= ys[i].unwrap().profit);
        best_interior = Some(refined.unwrap_or(ys[i].unwrap()));
    }

    let pick = match best_interior {
        Some(r) if r.profit > baseline.profit => r,
        _ => baseline,
    };
    Ok(Optimum {
        v_star: pick.v_bar,
        w_star: pick.w,
        revenue: pick.revenue,
        profit: pick.profit,
        regime: pick.regime,
        best_interior_profit: best_interior.map(|r| r.profit),
        no_compensation_profit: baseline.profit,
    })
}
