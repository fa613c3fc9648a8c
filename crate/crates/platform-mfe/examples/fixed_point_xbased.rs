//! Damped clip iteration: a location-based bonus reproduces the threshold
//! equilibrium, while an oversized threshold bonus never settles.

use platform_mfe::domain::RevenueThresholdScheme;
use platform_mfe::mfe::*;
use platform_mfe::twolevel::TwoLevelConfig;

fn main() -> platform_mfe::Result<()> {
    let market = TwoLevelConfig::new(0.2, 0.85)?.atoms_market()?;
    let sol = build_equilibrium(&market, 0.16)?;
    let w = xbased_equivalent(&market, &sol)?;
    let opts = FixedPointOptions::default();
    let res = solve_xbased(&market, &CompensationRule::XBased(w), &opts)?;
    let q = &sol.state.as_ref().unwrap().q;
    println!("location bonus: converged {} in {} steps, q = {:?} vs {:?}", res.converged, res.iterations, res.q, q);

    let bad = RevenueThresholdScheme::new(0.16, sol.w_paid + 0.1)?;
    let res = solve_xbased(&market, &CompensationRule::Threshold(bad), &opts)?;
    println!("threshold bonus +0.1: converged {}, last step {:.3e}", res.converged, res.residual);
    Ok(())
}
