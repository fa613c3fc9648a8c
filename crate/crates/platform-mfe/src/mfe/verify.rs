use serde::{Deserialize, Serialize};

use super::{Classification, EquilibriumSolution, Market, Region};
use crate::domain::XBasedScheme;
use crate::error::{invalid, Result};
use crate::numeric::ksum;

/// Max-norm residuals of an equilibrium candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `q` against `(1-β) p + g ∫βp`, in heights.
    pub consistency: f64,
    /// Worst violation of the best-response rule.
    pub incentive: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.consistency.max(self.incentive)
    }
}

/// Recompute `q` from `β` and check every cell's action against the payoff
/// of a GenAI draw, using the compensation stored in the solution.
pub fn verify_equilibrium(market: &Market, sol: &EquilibriumSolution) -> Result<Residuals> {
    let Some(st) = sol.state.as_ref() else {
        return invalid(format!("{} solution carries no state", sol.classification.label()));
    };
    let n = market.n_cells();
    market.check_cells(st.beta_ai.len(), "beta")?;
    market.check_cells(st.q.len(), "q")?;
    market.check_cells(st.compensation.len(), "compensation")?;
    let params = market.params();
    let (p, g) = (market.p_mass(), market.g_mass());
    let dx = market.dx();

    let b = ksum(st.beta_ai.iter().zip(p).map(|(b, p)| b * p));
    let mut consistency: f64 = 0.0;
    for i in 0..n {
        let q = ((1.0 - st.beta_ai[i]) * p[i] + g[i] * b) / dx;
        consistency = consistency.max((q - st.q[i]).abs());
    }

    let v: Vec<f64> =
        (0..n).map(|i| params.share() * (p[i] / (st.q[i] * dx)).powf(params.alpha)).collect();
    let v_genai = ksum((0..n).map(|i| g[i] * (v[i] + st.compensation[i])));
    let mut incentive: f64 = 0.0;
    for ((v, w), &beta) in v.iter().zip(&st.compensation).zip(&st.beta_ai) {
        let edge = v + w - params.cost - v_genai;
        let r = if beta >= 1.0 {
            edge.max(0.0)
        } else if beta > 0.0 {
            edge.abs()
        } else {
            (-edge).max(0.0)
        };
        incentive = incentive.max(r);
    }
    Ok(Residuals { consistency, incentive })
}

/// Location-based scheme that supports the same equilibrium: pay what the
/// solution pays, cell by cell. For interior solutions this is `w` on the
/// indifferent region and zero elsewhere; the region must agree with
/// `V(x;q) ≥ v̄`.
pub fn xbased_equivalent(market: &Market, sol: &EquilibriumSolution) -> Result<XBasedScheme> {
    let Some(st) = sol.state.as_ref() else {
        return invalid(format!("{} solution carries no state", sol.classification.label()));
    };
    market.check_cells(st.q.len(), "q")?;
    if sol.classification == Classification::Interior {
        let params = market.params();
        let level = sol.indifference_level.unwrap_or(sol.scheme.v_bar);
        let tol = 1e-9 * level.max(1.0);
        let dx = market.dx();
        for (i, region) in st.region.iter().enumerate() {
            let v = params.share() * (market.p_mass()[i] / (st.q[i] * dx)).powf(params.alpha);
            let reaches = v >= level - tol;
            if reaches != (*region == Region::In) {
                return invalid(format!("cell {i}: V = {v} disagrees with region {region:?} at level {level}"));
            }
        }
    }
    XBasedScheme::new(market.grid().copied(), st.compensation.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MarketParams;
    use crate::mfe::{build_equilibrium, classify_scheme, ClassifyOptions};
    use crate::domain::RevenueThresholdScheme;

    fn two_level(g_low: f64) -> Market {
        Market::from_atoms(
            &[(0.5, 1.0 - g_low / 2.0), (0.5, g_low / 2.0)],
            MarketParams::new(0.5, 0.85, 0.15).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn interior_passes() {
        let m = two_level(0.2);
        let sol = build_equilibrium(&m, 0.16).unwrap();
        let r = verify_equilibrium(&m, &sol).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn pure_ai_passes() {
        let m = two_level(0.4);
        let sol = classify_scheme(&m, RevenueThresholdScheme::new(0.3, 0.0).unwrap(), ClassifyOptions::default());
        assert_eq!(verify_equilibrium(&m, &sol).unwrap().incentive, 0.0);
    }

    #[test]
    fn perturbed_beta_detected() {
        let m = two_level(0.2);
        let mut sol = build_equilibrium(&m, 0.16).unwrap();
        sol.state.as_mut().unwrap().beta_ai[1] += 0.1;
        assert!(verify_equilibrium(&m, &sol).unwrap().consistency > 1e-3);
    }

    #[test]
    fn reducible_passes() {
        let m = two_level(0.2);
        let sol = classify_scheme(&m, RevenueThresholdScheme::new(0.16, 0.05).unwrap(), ClassifyOptions::default());
        assert!(verify_equilibrium(&m, &sol).unwrap().max() < 1e-9);
    }

    #[test]
    fn equivalent_scheme_values() {
        let m = two_level(0.2);
        let sol = build_equilibrium(&m, 0.16).unwrap();
        let w = xbased_equivalent(&m, &sol).unwrap();
        assert_eq!(w.values[0], 0.0);
        assert!((w.values[1] - 0.1483341873).abs() < 1e-10);
    }
}
