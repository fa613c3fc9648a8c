use serde::{Deserialize, Serialize};

use super::equilibrium::{indifferent_state, pure_ai_state};
use super::{build_equilibrium, interior_quantities, Classification, EquilibriumSolution, Market};
use crate::domain::RevenueThresholdScheme;
use crate::numeric::{bisect_bracket, ksum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Absolute tolerance when matching `w` against the implied bonus.
    pub w_tol: f64,
    /// Treat any `w` above the implied bonus as equal to it.
    pub assume_large_w: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { w_tol: 1e-6, assume_large_w: false }
    }
}

/// Case analysis for a revenue-threshold scheme. Always returns a solution;
/// nonexistence is a classification, not an error.
pub fn classify_scheme(market: &Market, scheme: RevenueThresholdScheme, opts: ClassifyOptions) -> EquilibriumSolution {
    let RevenueThresholdScheme { v_bar, w } = scheme;
    let share = market.params().share();
    let ceiling = market.pure_ai_ceiling();
    let genai_value = market.genai_value_plus_cost();

    // GenAI-only market: nobody can reach the bonus or beat a GenAI draw
    if genai_value.min(v_bar) >= ceiling {
        let mut sol = EquilibriumSolution::bare(scheme, Classification::PureAi);
        sol.state = Some(pure_ai_state(market, |v| scheme.bonus(v)));
        sol.boundary_tie = (genai_value.min(v_bar) - ceiling).abs() <= 1e-12 * ceiling
            && w > 0.0
            && v_bar + w > genai_value;
        return sol;
    }

    let v0 = market.v0();
    if let Some(v0) = v0 {
        if v_bar > v0 {
            let mut sol = match build_equilibrium(market, v0) {
                Ok(s) => s,
                Err(_) => return EquilibriumSolution::bare(scheme, Classification::Nonexistent),
            };
            sol.scheme = scheme;
            sol.classification = Classification::NoCompensationEquivalent;
            sol.w_paid = 0.0;
            if let Some(st) = sol.state.as_mut() {
                st.compensation.iter_mut().for_each(|c| *c = 0.0);
            }
            return sol;
        }
    }

    if v_bar > share {
        if let Ok(q) = interior_quantities(market.ratio_distribution(), v_bar, market.params()) {
            let gap = w - q.w_implied;
            if gap.abs() <= opts.w_tol || (gap > 0.0 && opts.assume_large_w) {
                if let Ok(mut sol) = build_equilibrium(market, v_bar) {
                    sol.scheme = scheme;
                    sol.assumed_large_w = gap > opts.w_tol;
                    return sol;
                }
            }
            if gap > 0.0 {
                let mut sol = EquilibriumSolution::bare(scheme, Classification::Nonexistent);
                sol.quantities = Some(q);
                return sol;
            }
        }
    }

    reduce(market, scheme, v0)
}

/// Compensated GenAI value minus the indifference condition, with creators
/// indifferent at level `v` under the original scheme.
fn reduction_residual(market: &Market, scheme: &RevenueThresholdScheme, v: f64) -> f64 {
    let params = market.params();
    let Ok(q) = interior_quantities(market.ratio_distribution(), v, params) else {
        return f64::NAN;
    };
    let a = params.alpha;
    let t = q.r_bar;
    let value = ksum(market.g_mass().iter().zip(market.ratio()).map(|(g, &r)| {
        let raw = if r < t { v * (r / t).powf(a) } else { v };
        g * (raw + scheme.bonus(raw))
    }));
    value + params.cost - scheme.w - v
}

/// Bonus below what `v̄` needs: find the level `ṽ > v̄` at which creators
/// are indifferent once the bonus is counted.
fn reduce(market: &Market, scheme: RevenueThresholdScheme, v0: Option<f64>) -> EquilibriumSolution {
    let params = market.params();
    let share = params.share();
    let lo = scheme.v_bar.max(share);
    let hi = v0.unwrap_or(market.pure_ai_ceiling() * (1.0 - 1e-14));
    let f = |v: f64| {
        if v <= share {
            params.cost
        } else {
            reduction_residual(market, &scheme, v)
        }
    };
    let f_hi = f(hi);
    let found = if !(hi > lo) {
        None
    } else if f_hi.abs() <= 1e-12 {
        // a uniform bonus leaves the no-compensation level in place
        Some((hi, hi))
    } else if f_hi < 0.0 {
        bisect_bracket(f, lo, hi, 1e-15 * hi).ok()
    } else {
        None
    };

    let Some((left, right)) = found else {
        return pure_ai_or_nonexistent(market, scheme);
    };
    let (v_tilde, residual) = {
        let (fl, fr) = (f(left), f(right));
        if fr.abs() < fl.abs() {
            (right, fr)
        } else {
            (left, fl)
        }
    };
    let Ok(q) = interior_quantities(market.ratio_distribution(), v_tilde, params) else {
        return pure_ai_or_nonexistent(market, scheme);
    };
    let state = indifferent_state(market, &q, |v| scheme.bonus(v));
    EquilibriumSolution {
        scheme,
        classification: Classification::Reducible { v_tilde, w_tilde: q.w_implied },
        indifference_level: Some(v_tilde),
        w_paid: scheme.w,
        quantities: Some(q),
        state: Some(state),
        boundary_tie: false,
        assumed_large_w: false,
        level_residual: residual.abs(),
    }
}

fn pure_ai_or_nonexistent(market: &Market, scheme: RevenueThresholdScheme) -> EquilibriumSolution {
    let params = market.params();
    let state = pure_ai_state(market, |v| scheme.bonus(v));
    let raw: Vec<f64> = market.ratio().iter().map(|r| params.share() * r.powf(params.alpha)).collect();
    let genai = ksum(market.g_mass().iter().zip(&raw).zip(&state.compensation).map(|((g, v), c)| g * (v + c)));
    let best_manual = raw
        .iter()
        .zip(&state.compensation)
        .map(|(v, c)| v + c - params.cost)
        .fold(f64::NEG_INFINITY, f64::max);
    if best_manual <= genai + 1e-12 {
        let mut sol = EquilibriumSolution::bare(scheme, Classification::PureAi);
        sol.state = Some(state);
        sol
    } else {
        EquilibriumSolution::bare(scheme, Classification::Nonexistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MarketParams;

    fn two_level(g_low: f64) -> Market {
        Market::from_atoms(
            &[(0.5, 1.0 - g_low / 2.0), (0.5, g_low / 2.0)],
            MarketParams::new(0.5, 0.85, 0.15).unwrap(),
        )
        .unwrap()
    }

    fn classify(m: &Market, v: f64, w: f64) -> EquilibriumSolution {
        classify_scheme(m, RevenueThresholdScheme::new(v, w).unwrap(), ClassifyOptions::default())
    }

    #[test]
    fn matching_bonus_is_interior() {
        let sol = classify(&two_level(0.2), 0.16, 0.148334);
        assert_eq!(sol.classification, Classification::Interior);
        assert!((sol.w_paid - 0.1483341873).abs() < 1e-10);
    }

    #[test]
    fn excess_bonus_is_nonexistent() {
        let sol = classify(&two_level(0.2), 0.16, 0.30);
        assert_eq!(sol.classification, Classification::Nonexistent);
        assert!(sol.state.is_none());
    }

    #[test]
    fn assume_large_w_flags_instead() {
        let m = two_level(0.2);
        let opts = ClassifyOptions { assume_large_w: true, ..Default::default() };
        let sol = classify_scheme(&m, RevenueThresholdScheme::new(0.16, 0.30).unwrap(), opts);
        assert_eq!(sol.classification, Classification::Interior);
        assert!(sol.assumed_large_w);
    }

    #[test]
    fn well_trained_genai_is_pure_ai() {
        let m = two_level(0.4);
        let sol = classify(&m, 0.30, 0.0);
        assert_eq!(sol.classification, Classification::PureAi);
        let st = sol.state.unwrap();
        assert!(st.beta_ai.iter().all(|b| *b == 1.0));
        assert!(!sol.boundary_tie);
    }

    #[test]
    fn above_v0_is_no_compensation() {
        let sol = classify(&two_level(0.2), 0.30, 0.05);
        assert_eq!(sol.classification, Classification::NoCompensationEquivalent);
        assert!((sol.indifference_level.unwrap() - 0.2811925325).abs() < 1e-9);
        assert!(sol.state.unwrap().compensation.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn small_bonus_reduces() {
        let m = two_level(0.2);
        let sol = classify(&m, 0.16, 0.05);
        match sol.classification {
            Classification::Reducible { v_tilde, w_tilde } => {
                assert!(v_tilde > 0.16 && v_tilde < 0.2811925325);
                assert!(sol.level_residual < 1e-10);
                // the reduced scheme pays on the same region and is interior
                let again = classify(&m, v_tilde, w_tilde);
                assert_eq!(again.classification, Classification::Interior);
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn low_threshold_reduces() {
        let sol = classify(&two_level(0.2), 0.10, 0.05);
        assert!(matches!(sol.classification, Classification::Reducible { .. }));
    }

    #[test]
    fn interior_is_idempotent() {
        let m = two_level(0.25);
        let first = build_equilibrium(&m, 0.18).unwrap();
        let again = classify_scheme(&m, first.scheme, ClassifyOptions::default());
        assert_eq!(again.classification, Classification::Interior);
        assert_eq!(again.indifference_level, Some(0.18));
    }
}
