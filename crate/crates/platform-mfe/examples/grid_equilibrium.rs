//! Equilibrium on a grid with smooth densities, checked by the verifier.

use platform_mfe::domain::{DensityField, Grid, MarketParams, DEFAULT_FLOOR};
use platform_mfe::mfe::{build_equilibrium, verify_equilibrium, Market, Region};

fn main() -> platform_mfe::Result<()> {
    let grid = Grid::new(0.0, 1.0, 400)?;
    // GenAI over-produces the middle and misses the edges
    let p = DensityField::from_fn(grid, DEFAULT_FLOOR, |x| 1.0 + 0.5 * (6.0 * x).sin())?;
    let g = DensityField::from_fn(grid, DEFAULT_FLOOR, |x| (-(x - 0.5).powi(2) / 0.05).exp())?;
    let market = Market::from_densities(&p, &g, MarketParams::new(0.5, 0.85, 0.15)?)?;
    let v0 = market.v0().expect("GenAI leaves room for manual creators");
    let v_bar = 0.5 * (0.15 + v0);
    let sol = build_equilibrium(&market, v_bar)?;
    let st = sol.state.as_ref().unwrap();
    let n_in = st.region.iter().filter(|r| **r == Region::In).count();
    println!("v0 = {v0:.6}, v_bar = {v_bar:.6}, bonus = {:.6}", sol.w_paid);
    println!("indifferent cells: {n_in}/{}, GenAI mass {:.4}", grid.n_cells(), st.genai_mass);
    let r = verify_equilibrium(&market, &sol)?;
    println!("residuals: consistency {:.2e}, incentive {:.2e}", r.consistency, r.incentive);
    Ok(())
}
