use super::{interior_quantities, Market};
use crate::error::{invalid, Result};
use crate::numeric::{bisect_bracket, ksum};

/// No-compensation indifference level `v̄₀`, solving `v̄ = Ṽ(v̄) + c`.
///
/// Exists only when `(1-γ) r_max^α > (1-γ) E_g[r^α] + c`; otherwise GenAI
/// alone is an equilibrium and `None` is returned. Atoms can make `Ṽ` jump;
/// the returned level is on the side where the implied bonus is still
/// nonnegative.
pub fn solve_v0(market: &Market) -> Option<f64> {
    let ceiling = market.pure_ai_ceiling();
    if ceiling <= market.genai_value_plus_cost() {
        return None;
    }
    let params = market.params();
    let rd = market.ratio_distribution();
    let h = |v: f64| {
        interior_quantities(rd, v, params).map(|q| q.w_implied).unwrap_or(f64::NAN)
    };
    let lo = params.share() * (1.0 + 1e-12);
    let hi = ceiling * (1.0 - 1e-14);
    let xtol = 1e-15 * ceiling;
    bisect_bracket(h, lo, hi, xtol).ok().map(|(lo, _)| lo)
}

/// Size of the jump in `Ṽ + c` at `r_max` when the top ratio is an atom:
/// `G(r = r_max)/G(r < r_max) · ((1-γ) r_max^α − (1-γ) E_g[r^α] − c)`.
pub fn discontinuity_gap(market: &Market) -> Result<f64> {
    let rd = market.ratio_distribution();
    if !rd.atom_at_max() {
        return Ok(0.0);
    }
    let entries = rd.entries();
    let g_top = entries[entries.len() - 1].g_mass;
    let g_below = ksum(entries[..entries.len() - 1].iter().map(|e| e.g_mass));
    if g_below <= 0.0 {
        return invalid("G(r < r_max) = 0: the top atom carries all GenAI mass");
    }
    Ok(g_top / g_below * (market.pure_ai_ceiling() - market.genai_value_plus_cost()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DensityField, Grid, MarketParams};

    fn params() -> MarketParams {
        MarketParams::new(0.5, 0.85, 0.15).unwrap()
    }

    fn two_level(g_low: f64) -> Market {
        Market::from_atoms(&[(0.5, 1.0 - g_low / 2.0), (0.5, g_low / 2.0)], params()).unwrap()
    }

    #[test]
    fn two_level_v0() {
        let v0 = solve_v0(&two_level(0.2)).unwrap();
        assert!((v0 - 0.2811925325).abs() < 1e-9);
        assert!(solve_v0(&two_level(0.4)).is_none());
    }

    #[test]
    fn identical_densities_have_no_v0() {
        let grid = Grid::new(0.0, 1.0, 16).unwrap();
        let p = DensityField::from_fn(grid, 1e-9, |x| 1.0 + x).unwrap();
        let m = Market::from_densities(&p, &p, params()).unwrap();
        assert!(solve_v0(&m).is_none());
        // a single ratio value means G(r < r_max) = 0
        assert!(discontinuity_gap(&m).is_err());
    }

    #[test]
    fn two_level_gap() {
        let (gl, gh) = (0.2f64, 1.8f64);
        let expected = (gl / 2.0) / (1.0 - gl / 2.0)
            * (0.15 / gl.sqrt() - 0.15 * (gl.sqrt() + gh.sqrt()) / 2.0 - 0.15);
        let gap = discontinuity_gap(&two_level(gl)).unwrap();
        assert!((gap - expected).abs() < 1e-14);
    }

    #[test]
    fn gap_matches_left_limit_of_v_tilde() {
        let m = two_level(0.2);
        let gap = discontinuity_gap(&m).unwrap();
        let v = m.pure_ai_ceiling() * (1.0 - 1e-9);
        let q = interior_quantities(m.ratio_distribution(), v, m.params()).unwrap();
        let jump = m.genai_value_plus_cost() - (q.v_tilde + 0.15);
        assert!((jump - gap).abs() < 1e-7);
    }

    #[test]
    fn atomless_top_has_zero_gap() {
        let grid = Grid::new(0.0, 1.0, 32).unwrap();
        let p = DensityField::from_fn(grid, 1e-9, |x| 1.0 + x).unwrap();
        let g = DensityField::from_fn(grid, 1e-9, |x| 2.0 - x).unwrap();
        let m = Market::from_densities(&p, &g, params()).unwrap();
        assert_eq!(discontinuity_gap(&m).unwrap(), 0.0);
    }
}
