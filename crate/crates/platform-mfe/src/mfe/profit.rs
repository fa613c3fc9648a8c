use serde::{Deserialize, Serialize};

use super::{build_equilibrium, Market};
use crate::error::{Error, Result};
use crate::market::revenue_integral;
use crate::numeric::ksum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Interior,
    /// `v̄` above the no-compensation level; the bonus never binds.
    NoCompensation,
    PureAi,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Interior => "interior",
            Regime::NoCompensation => "no_compensation",
            Regime::PureAi => "pure_ai",
        }
    }
}

/// Revenue and profit at one threshold, computed three ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfitReport {
    pub v_bar: f64,
    pub regime: Regime,
    /// Implied bonus; zero outside the interior regime.
    pub w: f64,
    pub m_p: f64,
    pub revenue: f64,
    pub profit: f64,
    pub revenue_formula: f64,
    pub profit_formula: f64,
    /// `R − w M_p`
    pub profit_identity: f64,
}

impl ProfitReport {
    /// Largest disagreement among the three profit routes and two revenue
    /// routes.
    pub fn route_gap(&self) -> f64 {
        [
            (self.profit - self.profit_formula).abs(),
            (self.profit - self.profit_identity).abs(),
            (self.revenue - self.revenue_formula).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Platform revenue and profit when the platform sets `v̄` and pays the
/// implied bonus.
pub fn profit_at(market: &Market, v_bar: f64) -> Result<ProfitReport> {
    let params = market.params();
    if !(v_bar > params.share()) {
        return Err(Error::NotAdmissible { v_bar, reason: "needs v_bar > 1-gamma".into() });
    }
    let (level, regime) = match market.v0() {
        Some(v0) if v_bar >= v0 => (v0, Regime::NoCompensation),
        Some(_) => (v_bar, Regime::Interior),
        None if v_bar >= market.pure_ai_ceiling() => return Ok(pure_ai_report(market, v_bar)),
        None => (v_bar, Regime::Interior),
    };
    let sol = build_equilibrium(market, level)?;
    let q = sol.quantities.expect("interior quantities");
    let st = sol.state.expect("interior state");
    let dx = market.dx();
    let q_mass: Vec<f64> = st.q.iter().map(|h| h * dx).collect();
    let revenue = revenue_integral(market.p_mass(), &q_mass, params);
    let paid = ksum(st.compensation.iter().zip(&q_mass).map(|(w, m)| w * m));
    let w = if regime == Regime::NoCompensation { 0.0 } else { sol.w_paid };
    Ok(ProfitReport {
        v_bar,
        regime,
        w,
        m_p: q.m_p,
        revenue,
        profit: revenue - paid,
        revenue_formula: q.revenue_formula(params),
        profit_formula: q.profit_formula(params),
        profit_identity: revenue - sol.w_paid * q.m_p,
    })
}

fn pure_ai_report(market: &Market, v_bar: f64) -> ProfitReport {
    let params = market.params();
    let revenue = revenue_integral(market.p_mass(), market.g_mass(), params);
    let formula = params.gamma * market.ratio_distribution().e_g_r_alpha(params.alpha);
    ProfitReport {
        v_bar,
        regime: Regime::PureAi,
        w: 0.0,
        m_p: 0.0,
        revenue,
        profit: revenue,
        revenue_formula: formula,
        profit_formula: formula,
        profit_identity: revenue,
    }
}

/// One row of a profit curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub v_bar: f64,
    pub w: f64,
    pub revenue: f64,
    pub profit: f64,
    pub regime: Regime,
}

/// `n` evenly spaced thresholds on `(1-γ, 1.05 · upper]`, where `upper` is
/// `v̄₀` or the pure-AI ceiling.
pub fn default_sweep(market: &Market, n: usize) -> Vec<f64> {
    let lo = market.params().share();
    let upper = market.v0().unwrap_or_else(|| market.pure_ai_ceiling()) * 1.05;
    (1..=n).map(|i| lo + (upper - lo) * i as f64 / n as f64).collect()
}

pub fn profit_curve(market: &Market, v_values: &[f64]) -> Result<Vec<CurvePoint>> {
    v_values
        .iter()
        .map(|&v| {
            profit_at(market, v).map(|r| CurvePoint {
                v_bar: v,
                w: r.w,
                revenue: r.revenue,
                profit: r.profit,
                regime: r.regime,
            })
        })
        .collect()
}
