use crate::domain::{MarketParams, RatioDistribution};
use crate::error::{Error, Result};
use crate::numeric::Neumaier;

/// Ratio threshold `r̄` solving `t G(r<t) + P(r≥t) = (v̄/(1-γ))^(1/α)`.
///
/// The left side is linear between consecutive atoms, so each segment is
/// solved exactly.
pub fn solve_rbar(rd: &RatioDistribution, v_bar: f64, params: &MarketParams) -> Result<f64> {
    let share = params.share();
    // tolerate 1-γ rounding, e.g. 1 - 0.85
    if !(v_bar >= share * (1.0 - 1e-12)) {
        return Err(Error::NotAdmissible {
            v_bar,
            reason: format!("r_bar needs v_bar >= 1-gamma = {share}"),
        });
    }
    let rhs = (v_bar / share).powf(1.0 / params.alpha);
    let e = rd.entries();
    if rhs <= 1.0 {
        return Ok(rd.r_min());
    }

    // suffix[k] = P(r >= r_k)
    let n = e.len();
    let mut suffix = vec![0.0; n + 1];
    let mut acc = Neumaier::default();
    for k in (0..n).rev() {
        acc.add(e[k].p_mass);
        suffix[k] = acc.value();
    }
    let mut g_below = Neumaier::default();
    for k in 1..=n {
        // t in (r_{k-1}, r_k]: entries 0..k are GenAI-only
        g_below.add(e[k - 1].g_mass);
        let g_ai = g_below.value();
        let p_in = suffix[k];
        if k == n || rhs <= e[k].r * g_ai + p_in {
            let t = (rhs - p_in) / g_ai;
            return Ok(t.max(e[k - 1].r));
        }
    }
    unreachable!("last segment always returns")
}
