use serde::{Deserialize, Serialize};

use super::solve_rbar;
use crate::domain::{MarketParams, RatioDistribution};
use crate::error::{Error, Result};
use crate::numeric::Neumaier;

/// Threshold integrals at a given `v̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorQuantities {
    pub v_bar: f64,
    pub r_bar: f64,
    /// `Σ_{r<r̄} g r^α`
    pub m_g: f64,
    /// Content mass on the indifferent region.
    pub m_p: f64,
    /// Expected compensated revenue of a GenAI draw.
    pub v_tilde: f64,
    pub w_implied: f64,
    /// `G(r < r̄)`
    pub g_ai: f64,
    /// `P(r ≥ r̄)`
    pub p_in: f64,
    /// `((1-γ)/v̄)^(1/α)`, the ratio `q/p` on the indifferent region.
    pub k: f64,
}

impl InteriorQuantities {
    /// GenAI content mass `∫βp = k r̄`.
    pub fn genai_mass(&self) -> f64 {
        self.k * self.r_bar
    }

    /// Revenue from the closed form in `M_g`, `M_p` and `r̄`.
    pub fn revenue_formula(&self, params: &MarketParams) -> f64 {
        let MarketParams { alpha: a, gamma, .. } = *params;
        let s = params.share();
        gamma * (self.v_bar / s) * self.m_p
            + gamma * self.r_bar.powf(1.0 - a) * (s / self.v_bar).powf(1.0 / a - 1.0) * self.m_g
    }

    /// Profit from the closed form in `M_g`, `M_p` and `r̄`.
    pub fn profit_formula(&self, params: &MarketParams) -> f64 {
        let MarketParams { alpha: a, gamma, cost: c } = *params;
        let s = params.share();
        let (t, mp, v) = (self.r_bar, self.m_p, self.v_bar);
        (v / s) * mp + t.powf(1.0 - a) * (s / v).powf(1.0 / a - 1.0) * ((gamma - mp) / (1.0 - mp)) * self.m_g
            - c * t * self.k * mp / (1.0 - mp)
    }
}

/// `r̄`, `M_g`, `M_p`, `Ṽ` and the implied compensation at `v̄`.
pub fn interior_quantities(rd: &RatioDistribution, v_bar: f64, params: &MarketParams) -> Result<InteriorQuantities> {
    let t = solve_rbar(rd, v_bar, params)?;
    let a = params.alpha;
    let k = (params.share() / v_bar).powf(1.0 / a);
    let mut g_ai = Neumaier::default();
    let mut m_g = Neumaier::default();
    let mut p_in = Neumaier::default();
    for e in rd.entries() {
        if e.r < t {
            g_ai.add(e.g_mass);
            m_g.add(e.g_mass * e.r.powf(a));
        } else {
            p_in.add(e.p_mass);
        }
    }
    let (g_ai, m_g, p_in) = (g_ai.value(), m_g.value(), p_in.value());
    if g_ai <= 0.0 {
        return Err(Error::EmptyAiRegion(v_bar));
    }
    let m_p = k * p_in;
    if m_p >= 1.0 {
        return Err(Error::FullIndifference(v_bar));
    }
    // GenAI draws earn v̄ (r/r̄)^α off the indifferent region and v̄ + w on it;
    // solving that self-reference for Ṽ gives the form below.
    let v_tilde = (v_bar * m_g / t.powf(a) + params.cost) / g_ai - params.cost;
    Ok(InteriorQuantities {
        v_bar,
        r_bar: t,
        m_g,
        m_p,
        v_tilde,
        w_implied: v_tilde + params.cost - v_bar,
        g_ai,
        p_in,
        k,
    })
}
