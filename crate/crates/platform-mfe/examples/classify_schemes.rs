//! Case analysis for a handful of `(v_bar, w)` schemes.

use platform_mfe::domain::RevenueThresholdScheme;
use platform_mfe::mfe::{classify_scheme, ClassifyOptions};
use platform_mfe::twolevel::TwoLevelConfig;

fn main() -> platform_mfe::Result<()> {
    for g_low in [0.2, 0.4] {
        let market = TwoLevelConfig::new(g_low, 0.85)?.atoms_market()?;
        println!("g_low = {g_low}");
        for (v, w) in [(0.16, 0.1483341873), (0.16, 0.30), (0.16, 0.05), (0.30, 0.05), (0.30, 0.0)] {
            let sol = classify_scheme(&market, RevenueThresholdScheme::new(v, w)?, ClassifyOptions::default());
            println!("  ({v:.3}, {w:.4}) -> {:?}", sol.classification);
        }
    }
    Ok(())
}
