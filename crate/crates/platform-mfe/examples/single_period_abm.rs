//! One simulated period under three schemes.

use platform_mfe::cli::{TABLE_MODEL, TABLE_SCHEMES};
use platform_mfe::domain::RevenueThresholdScheme;
use platform_mfe::sim::{run_schemes, AbmConfig};

fn main() -> platform_mfe::Result<()> {
    let schemes: Vec<_> = TABLE_SCHEMES.iter().map(|&(v, w)| RevenueThresholdScheme::new(v, w)).collect::<Result<_, _>>()?;
    let base = AbmConfig::reference(schemes[0], 1);
    for (s, r) in schemes.iter().zip(run_schemes(&base, &TABLE_MODEL, &schemes)?) {
        println!(
            "({:.3}, {:.3}): R {:.4}  Pi {:.4}  manual {:.3}  rounds {}",
            s.v_bar, s.w, r.revenue, r.profit, r.manual_fraction, r.rounds_used
        );
    }
    Ok(())
}
