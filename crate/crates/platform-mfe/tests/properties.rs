use platform_mfe::domain::{DensityField, Grid, MarketParams, RevenueThresholdScheme, DEFAULT_FLOOR};
use platform_mfe::mfe::*;
use proptest::prelude::*;

fn market_from(p: &[f64], g: &[f64], gamma: f64) -> Market {
    let grid = Grid::new(0.0, 1.0, p.len()).unwrap();
    let p = DensityField::from_values(grid, p, DEFAULT_FLOOR).unwrap();
    let g = DensityField::from_values(grid, g, DEFAULT_FLOOR).unwrap();
    Market::from_densities(&p, &g, MarketParams::new(0.5, gamma, 1.0 - gamma).unwrap()).unwrap()
}

prop_compose! {
    fn pair()(n in 8usize..48)(
        p in prop::collection::vec(0.05f64..2.0, n),
        g in prop::collection::vec(0.05f64..2.0, n),
        gamma in 0.7f64..0.95,
    ) -> Market {
        market_from(&p, &g, gamma)
    }
}

/// Thresholds strictly inside the interior regime.
fn interior_levels(m: &Market, n: usize) -> Vec<f64> {
    let lo = m.params().share();
    let hi = m.v0().unwrap_or_else(|| m.pure_ai_ceiling());
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn content_mass_is_one(m in pair()) {
        for v in interior_levels(&m, 5) {
            let st = build_equilibrium(&m, v).unwrap().state.unwrap();
            let mass: f64 = st.q.iter().sum::<f64>() * m.dx();
            prop_assert!((mass - 1.0).abs() <= 1e-12, "mass {mass}");
            prop_assert!(st.genai_mass > 0.0);
        }
    }

    #[test]
    fn revenue_non_increasing(m in pair()) {
        let pts = profit_curve(&m, &default_sweep(&m, 200)).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].revenue <= w[0].revenue + 1e-10);
        }
        for p in &pts {
            prop_assert!(p.profit <= m.params().gamma + 1e-9);
        }
    }

    #[test]
    fn three_routes_agree(m in pair()) {
        for v in interior_levels(&m, 10) {
            let r = profit_at(&m, v).unwrap();
            prop_assert!(r.route_gap() <= 1e-6, "gap {}", r.route_gap());
        }
    }

    #[test]
    fn equilibrium_never_equals_p(m in pair()) {
        let g_gap = m.p_mass().iter().zip(m.g_mass()).map(|(p, g)| (p - g).abs()).fold(0.0, f64::max) / m.dx();
        prop_assume!(g_gap > 1e-6);
        for v in interior_levels(&m, 5) {
            let st = build_equilibrium(&m, v).unwrap().state.unwrap();
            let dev = st.q.iter().zip(m.p_mass()).map(|(q, p)| (q - p / m.dx()).abs()).fold(0.0, f64::max);
            prop_assert!(dev > 0.0);
        }
    }

    #[test]
    fn interior_outputs_verify(m in pair()) {
        for v in interior_levels(&m, 5) {
            let sol = build_equilibrium(&m, v).unwrap();
            let r = verify_equilibrium(&m, &sol).unwrap();
            prop_assert!(r.max() <= 1e-8, "{r:?}");
            let back = classify_scheme(&m, sol.scheme, ClassifyOptions::default());
            prop_assert_eq!(back.classification, Classification::Interior);
            prop_assert_eq!(back.indifference_level, Some(v));
        }
    }

    #[test]
    fn threshold_ratio_monotone(m in pair()) {
        let lo = m.params().share();
        let vs: Vec<f64> = (0..50).map(|i| lo * (1.0 + 0.05 * i as f64)).collect();
        let ts: Vec<f64> = vs.iter().map(|&v| solve_rbar(m.ratio_distribution(), v, m.params()).unwrap()).collect();
        for w in ts.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn classification_is_total(m in pair(), v in 0.0f64..0.6, w in 0.0f64..0.4) {
        let sol = classify_scheme(&m, RevenueThresholdScheme::new(v, w).unwrap(), ClassifyOptions::default());
        if let Some(st) = sol.state.as_ref() {
            prop_assert!(st.genai_mass > 0.0);
        }
    }

    #[test]
    fn xbased_equivalent_recovers_q(m in pair()) {
        let v = interior_levels(&m, 3)[1];
        let sol = build_equilibrium(&m, v).unwrap();
        let w = xbased_equivalent(&m, &sol).unwrap();
        let res = solve_xbased(&m, &CompensationRule::XBased(w), &FixedPointOptions::default()).unwrap();
        let st = sol.state.unwrap();
        let tv = 0.5 * res.q.iter().zip(&st.q).map(|(a, b)| (a - b).abs()).sum::<f64>() * m.dx();
        prop_assert!(tv <= 1e-3, "tv {tv}");
        prop_assert!((res.genai_mass - st.genai_mass).abs() <= 1e-3);
    }
}
