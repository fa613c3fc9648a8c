use serde::{Deserialize, Serialize};

use super::{interior_quantities, InteriorQuantities, Market};
use crate::domain::RevenueThresholdScheme;
use crate::error::{Error, Result};
use crate::numeric::ksum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Creators use GenAI with probability one.
    Ai,
    /// Creators are indifferent and mix.
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Classification {
    Interior,
    PureAi,
    NoCompensationEquivalent,
    Reducible { v_tilde: f64, w_tilde: f64 },
    Nonexistent,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Interior => "interior",
            Classification::PureAi => "pure_ai",
            Classification::NoCompensationEquivalent => "no_compensation_equivalent",
            Classification::Reducible { .. } => "reducible",
            Classification::Nonexistent => "nonexistent",
        }
    }
}

/// Per-cell equilibrium state. `q` holds heights (masses over `dx`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumState {
    pub beta_ai: Vec<f64>,
    pub q: Vec<f64>,
    pub region: Vec<Region>,
    /// Compensation paid per cell.
    pub compensation: Vec<f64>,
    pub genai_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    /// Scheme as requested.
    pub scheme: RevenueThresholdScheme,
    pub classification: Classification,
    /// Revenue level at which indifferent creators sit.
    pub indifference_level: Option<f64>,
    /// Bonus actually paid on the indifferent region.
    pub w_paid: f64,
    pub quantities: Option<InteriorQuantities>,
    pub state: Option<EquilibriumState>,
    pub boundary_tie: bool,
    pub assumed_large_w: bool,
    /// Residual of the indifference equation used to pick the level.
    pub level_residual: f64,
}

impl EquilibriumSolution {
    pub(crate) fn bare(scheme: RevenueThresholdScheme, classification: Classification) -> Self {
        Self {
            scheme,
            classification,
            indifference_level: None,
            w_paid: 0.0,
            quantities: None,
            state: None,
            boundary_tie: false,
            assumed_large_w: false,
            level_residual: 0.0,
        }
    }
}

/// Equilibrium state with indifference at `level`, paying `bonus(V)` per
/// cell. `q = k p` on `r ≥ r̄`, `q = k r̄ g` below.
pub(crate) fn indifferent_state(
    market: &Market,
    quantities: &InteriorQuantities,
    bonus: impl Fn(f64) -> f64,
) -> EquilibriumState {
    let (t, k, level) = (quantities.r_bar, quantities.k, quantities.v_bar);
    let a = market.params().alpha;
    let n = market.n_cells();
    let mut beta = Vec::with_capacity(n);
    let mut q_mass = Vec::with_capacity(n);
    let mut region = Vec::with_capacity(n);
    let mut comp = Vec::with_capacity(n);
    for i in 0..n {
        let (p, g, r) = (market.p_mass()[i], market.g_mass()[i], market.ratio()[i]);
        if r < t {
            beta.push(1.0);
            q_mass.push(k * t * g);
            region.push(Region::Ai);
            comp.push(bonus(level * (r / t).powf(a)));
        } else {
            beta.push((1.0 - k * (1.0 - t / r)).clamp(0.0, 1.0));
            q_mass.push(k * p);
            region.push(Region::In);
            comp.push(bonus(level));
        }
    }
    let genai_mass = ksum(beta.iter().zip(market.p_mass()).map(|(b, p)| b * p));
    EquilibriumState { beta_ai: beta, q: market.heights(&q_mass), region, compensation: comp, genai_mass }
}

/// `β = 1, q = g`, paying `bonus((1-γ) r^α)`.
pub(crate) fn pure_ai_state(market: &Market, bonus: impl Fn(f64) -> f64) -> EquilibriumState {
    let params = market.params();
    let n = market.n_cells();
    EquilibriumState {
        beta_ai: vec![1.0; n],
        q: market.heights(market.g_mass()),
        region: vec![Region::Ai; n],
        compensation: market.ratio().iter().map(|r| bonus(params.share() * r.powf(params.alpha))).collect(),
        genai_mass: 1.0,
    }
}

/// Interior equilibrium at an admissible `v̄`, paying the implied bonus.
pub fn build_equilibrium(market: &Market, v_bar: f64) -> Result<EquilibriumSolution> {
    let share = market.params().share();
    let ceiling = market.pure_ai_ceiling();
    let reject = |reason: String| Err(Error::NotAdmissible { v_bar, reason });
    if !(v_bar > share) {
        return reject(format!("needs v_bar > 1-gamma = {share}"));
    }
    if !(v_bar < ceiling) {
        return reject(format!("needs v_bar < (1-gamma) r_max^alpha = {ceiling}"));
    }
    let quantities = interior_quantities(market.ratio_distribution(), v_bar, market.params())?;
    if quantities.w_implied < -1e-12 {
        return reject(format!(
            "needs v_bar <= V_tilde + c = {}",
            quantities.v_tilde + market.params().cost
        ));
    }
    let w = quantities.w_implied.max(0.0);
    let state = indifferent_state(market, &quantities, |v| if v >= v_bar { w } else { 0.0 });
    Ok(EquilibriumSolution {
        scheme: RevenueThresholdScheme { v_bar, w },
        classification: Classification::Interior,
        indifference_level: Some(v_bar),
        w_paid: w,
        quantities: Some(quantities),
        state: Some(state),
        boundary_tie: false,
        assumed_large_w: false,
        level_residual: 0.0,
    })
}
