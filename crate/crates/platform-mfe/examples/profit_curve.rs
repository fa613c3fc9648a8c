//! Profit against the threshold and the optimum, for three GenAI qualities.

use platform_mfe::mfe::{default_sweep, optimize_vstar, profit_curve};
use platform_mfe::twolevel::TwoLevelConfig;

fn main() -> platform_mfe::Result<()> {
    for g_low in [0.2, 0.3, 0.4] {
        let market = TwoLevelConfig::new(g_low, 0.85)?.atoms_market()?;
        let curve = profit_curve(&market, &default_sweep(&market, 8))?;
        println!("g_low = {g_low}");
        for p in curve {
            println!("  v_bar {:.4}  w {:.4}  R {:.4}  Pi {:.4}  {}", p.v_bar, p.w, p.revenue, p.profit, p.regime.label());
        }
        let o = optimize_vstar(&market, 512)?;
        println!("  best: w* = {:.5}, Pi* = {:.5} ({})", o.w_star, o.profit, o.regime.label());
    }
    Ok(())
}
