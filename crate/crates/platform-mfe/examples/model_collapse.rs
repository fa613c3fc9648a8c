//! Ten periods of retraining on the platform's own contents.

use platform_mfe::domain::RevenueThresholdScheme;
use platform_mfe::sim::{run_multiperiod, AbmConfig, MultiPeriodConfig};

fn main() -> platform_mfe::Result<()> {
    for (v, w) in [(0.110, 0.0), (0.105, 0.150)] {
        let cfg = MultiPeriodConfig::reference(AbmConfig::reference(RevenueThresholdScheme::new(v, w)?, 1));
        let out = run_multiperiod(&cfg)?;
        println!("scheme ({v}, {w})");
        for r in &out {
            let m = r.metrics;
            println!(
                "  t={:>2} Pi {:.3} manual {:.3} central {:.3} modal {:.3} tv {:.3}",
                r.t, r.profit, r.manual_fraction, m.central_mass, m.modal_mass, m.tv_to_p
            );
        }
        println!("  total profit {:.3}", out.iter().map(|r| r.profit).sum::<f64>());
    }
    Ok(())
}
