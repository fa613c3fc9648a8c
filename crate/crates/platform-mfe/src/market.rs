//! Revenue and profit functionals, and the pre-GenAI baseline.

use serde::{Deserialize, Serialize};

use crate::domain::{DensityField, Grid, MarketParams, RevenueThresholdScheme};
use crate::error::{invalid, Error, Result};
use crate::numeric::ksum;

/// Per-cell action probabilities for manual (H), GenAI and opting out (O).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreatorStrategy {
    pub grid: Grid,
    pub beta_h: Vec<f64>,
    pub beta_ai: Vec<f64>,
    pub beta_o: Vec<f64>,
}

/// `(1-gamma) (p/q)^alpha` for matching slices of masses or heights.
pub fn revenue_kernel(p: &[f64], q: &[f64], params: &MarketParams) -> Vec<f64> {
    p.iter()
        .zip(q)
        .map(|(&pi, &qi)| params.share() * (pi / qi).powf(params.alpha))
        .collect()
}

/// `gamma Σ p_i^alpha q_i^(1-alpha)` for masses.
pub fn revenue_integral(p: &[f64], q: &[f64], params: &MarketParams) -> f64 {
    let a = params.alpha;
    params.gamma * ksum(p.iter().zip(q).map(|(&pi, &qi)| pi.powf(a) * qi.powf(1.0 - a)))
}

/// Creator revenue `V(y;q)` per cell.
pub fn creator_revenue(q: &DensityField, p: &DensityField, params: &MarketParams) -> Result<Vec<f64>> {
    q.same_grid(p)?;
    Ok(revenue_kernel(p.values(), q.values(), params))
}

/// `V + w 1[V >= v_bar]` per cell.
pub fn compensated_revenue(v: &[f64], scheme: &RevenueThresholdScheme) -> Vec<f64> {
    v.iter().map(|&vi| vi + scheme.bonus(vi)).collect()
}

/// Expected revenue of a GenAI draw: `Σ V_comp g Δ`.
pub fn genai_expected_revenue(v_comp: &[f64], g: &DensityField) -> Result<f64> {
    if v_comp.len() != g.values().len() {
        return Err(Error::GridMismatch(format!(
            "{} values for {} cells",
            v_comp.len(),
            g.values().len()
        )));
    }
    Ok(ksum(v_comp.iter().zip(g.masses()).map(|(v, m)| v * m)))
}

/// Content density `q = (1-beta) p + g ∫beta p`.
pub fn content_distribution(beta_ai: &[f64], p: &DensityField, g: &DensityField) -> Result<DensityField> {
    p.same_grid(g)?;
    if beta_ai.len() != p.values().len() {
        return Err(Error::GridMismatch("beta length".into()));
    }
    if beta_ai.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return invalid("beta must lie in [0,1]");
    }
    let genai_mass = ksum(beta_ai.iter().zip(p.masses()).map(|(b, m)| b * m));
    let q: Vec<f64> = beta_ai
        .iter()
        .zip(p.values().iter().zip(g.values()))
        .map(|(b, (pv, gv))| (1.0 - b) * pv + gv * genai_mass)
        .collect();
    let q = DensityField::from_heights(*p.grid(), q)?;
    debug_assert!((q.total_mass() - 1.0).abs() < 1e-10);
    Ok(q)
}

/// Platform revenue per consumer, `gamma ∫ p^alpha q^(1-alpha)`.
pub fn platform_revenue(q: &DensityField, p: &DensityField, params: &MarketParams) -> Result<f64> {
    q.same_grid(p)?;
    Ok(revenue_integral(&p.masses(), &q.masses(), params))
}

/// Revenue minus compensation `Σ W_i q_i Δ`.
pub fn platform_profit(
    q: &DensityField,
    p: &DensityField,
    w_field: &[f64],
    params: &MarketParams,
) -> Result<f64> {
    if w_field.len() != q.values().len() {
        return Err(Error::GridMismatch("compensation length".into()));
    }
    if w_field.iter().any(|w| *w < 0.0) {
        return invalid("compensation must be nonnegative");
    }
    let paid = ksum(w_field.iter().zip(q.masses()).map(|(w, m)| w * m));
    Ok(platform_revenue(q, p, params)? - paid)
}

/// Manual-creation probability under a constant compensation `w_const`.
pub fn pregenai_beta(params: &MarketParams, w_const: f64) -> f64 {
    let gap = (params.cost - w_const).max(0.0);
    if gap == 0.0 {
        return 1.0;
    }
    (params.share() / gap).powf(1.0 / params.alpha).min(1.0)
}

/// Equilibrium without GenAI under a constant compensation.
pub fn pregenai_equilibrium(
    params: &MarketParams,
    w_const: f64,
    p: &DensityField,
) -> Result<(CreatorStrategy, DensityField)> {
    if !(w_const >= 0.0) {
        return invalid(format!("compensation must be nonnegative, got {w_const}"));
    }
    let b = pregenai_beta(params, w_const);
    let n = p.values().len();
    let strategy = CreatorStrategy {
        grid: *p.grid(),
        beta_h: vec![b; n],
        beta_ai: vec![0.0; n],
        beta_o: vec![1.0 - b; n],
    };
    let q = DensityField::from_heights(*p.grid(), p.values().iter().map(|v| b * v).collect())?;
    Ok((strategy, q))
}

/// Pre-GenAI profit under a constant compensation, `gamma b^(1-alpha) - w b`.
pub fn pregenai_profit(params: &MarketParams, w_const: f64) -> f64 {
    let b = pregenai_beta(params, w_const);
    params.gamma * b.powf(1.0 - params.alpha) - w_const * b
}

/// Optimal constant compensation and profit without GenAI.
///
/// When the interior optimum would push the manual share above one the
/// constraint binds and the best scheme pays exactly `c - (1-gamma)`.
pub fn pregenai_optimal(params: &MarketParams) -> (f64, f64) {
    let MarketParams { alpha, gamma, cost: c } = *params;
    if params.share() >= c {
        return (0.0, gamma);
    }
    if gamma <= alpha {
        return (0.0, gamma * (params.share() / c).powf(1.0 / alpha - 1.0));
    }
    if c >= 1.0 - alpha {
        let w = c * (gamma - alpha) / (1.0 - alpha);
        (w, alpha * ((1.0 - alpha) / c).powf(1.0 / alpha - 1.0))
    } else {
        (c - params.share(), 1.0 - c)
    }
}

/// Posterior probability that content at each cell was GenAI-made.
pub fn ai_posterior(
    q: &DensityField,
    g: &DensityField,
    beta_ai: &[f64],
    p: &DensityField,
) -> Result<Vec<f64>> {
    q.same_grid(g)?;
    q.same_grid(p)?;
    let genai_mass = ksum(beta_ai.iter().zip(p.masses()).map(|(b, m)| b * m));
    Ok(g.values()
        .iter()
        .zip(q.values())
        .map(|(gv, qv)| (gv * genai_mass / qv).clamp(0.0, 1.0))
        .collect())
}
