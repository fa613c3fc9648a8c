//! Closed forms for the two-level market next to the generic solver.

use platform_mfe::mfe::{interior_quantities, profit_at};
use platform_mfe::twolevel::*;

fn main() -> platform_mfe::Result<()> {
    let cfg = TwoLevelConfig::new(0.2, 0.85)?;
    let market = cfg.atoms_market()?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>12}", "v_bar", "r_bar", "w", "R", "Pi", "solver gap");
    for v in [0.155, 0.16, 0.18, 0.2, 0.24, 0.28] {
        let q = twolevel_quantities(&cfg, v)?;
        let (r, pi) = twolevel_profit(&cfg, v)?;
        let g = interior_quantities(market.ratio_distribution(), v, market.params())?;
        let gap = (g.w_implied - q.w_implied).abs().max((profit_at(&market, v)?.profit - pi).abs());
        println!("{v:>6.3} {:>10.6} {:>10.6} {r:>10.6} {pi:>10.6} {gap:>12.2e}", q.r_bar, q.w_implied);
    }
    let g_star = twolevel_gstar(&cfg.params())?;
    println!("no-compensation level v0 = {:.10}", twolevel_v0(&cfg)?);
    println!("g* = {g_star:.10}");
    for g in [0.3, 0.4] {
        println!("minimum effective bonus at g_low = {g}: {:.6}", twolevel_wmin(&TwoLevelConfig::new(g, 0.85)?));
    }
    Ok(())
}
