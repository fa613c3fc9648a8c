//! Best constant compensation before GenAI exists.

use platform_mfe::domain::MarketParams;
use platform_mfe::market::{pregenai_beta, pregenai_optimal};

fn main() -> platform_mfe::Result<()> {
    for (alpha, gamma, cost) in [(0.5, 0.9, 0.5), (0.5, 0.85, 0.15), (0.3, 0.6, 0.8), (0.5, 0.9, 0.2)] {
        let params = MarketParams::new(alpha, gamma, cost)?;
        let (w, pi) = pregenai_optimal(&params);
        let b = pregenai_beta(&params, w);
        println!("alpha {alpha} gamma {gamma} c {cost}: W* = {w:.4}, Pi* = {pi:.4}, manual share {b:.4}");
    }
    Ok(())
}
