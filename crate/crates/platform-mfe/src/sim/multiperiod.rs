use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{collapse_metrics, run_period, AbmConfig, CollapseMetrics, GenerativeModel, ModelKnobs, PeriodRecord};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPeriodConfig {
    pub period: AbmConfig,
    pub periods: usize,
    /// First model, fitted on fresh human samples.
    pub initial_model: ModelKnobs,
    /// Later models, fitted on the previous period's contents.
    pub refit: ModelKnobs,
}

impl MultiPeriodConfig {
    /// Ten periods; the first model sees 26500 human samples and later
    /// models are refitted on every content of the previous period.
    pub fn reference(period: AbmConfig) -> Self {
        let n = period.n_agents;
        Self {
            period,
            periods: 10,
            initial_model: ModelKnobs { bandwidth: 0.3, shrink: 0.9, train_samples: 26_500 },
            refit: ModelKnobs { bandwidth: 0.65, shrink: 0.7, train_samples: n },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodSummary {
    pub t: usize,
    pub revenue: f64,
    pub profit: f64,
    pub manual_fraction: f64,
    pub rounds_used: usize,
    pub converged: bool,
    pub metrics: CollapseMetrics,
    pub content_hist: Vec<usize>,
}

/// Repeated periods under a fixed scheme, each model trained on the
/// contents of the period before.
pub fn run_multiperiod(cfg: &MultiPeriodConfig) -> Result<Vec<PeriodSummary>> {
    cfg.period.validate()?;
    if cfg.periods == 0 {
        return invalid("need at least one period");
    }
    let pc = &cfg.period;
    let clip = (pc.mixture.clip_lo, pc.mixture.clip_hi);
    let mut rng = ChaCha8Rng::seed_from_u64(pc.seed);
    let train = pc.mixture.sample(&mut rng, cfg.initial_model.train_samples);
    let mut model = GenerativeModel::fit(&train, cfg.initial_model.bandwidth, cfg.initial_model.shrink, clip)?;
    let mut contents = pc.mixture.sample(&mut rng, pc.n_agents);
    let mut out = Vec::with_capacity(cfg.periods);
    for t in 1..=cfg.periods {
        let rec: PeriodRecord = run_period(pc, &model, &contents, &mut rng)?;
        out.push(PeriodSummary {
            t,
            revenue: rec.revenue,
            profit: rec.profit,
            manual_fraction: rec.manual_fraction,
            rounds_used: rec.rounds_used,
            converged: rec.converged,
            metrics: collapse_metrics(&rec.contents, &pc.mixture, pc.n_bins),
            content_hist: rec.content_hist,
        });
        contents = rec.contents;
        let keep = cfg.refit.train_samples.min(contents.len());
        let train: Vec<f64> = if keep < contents.len() {
            let mut c = contents.clone();
            c.shuffle(&mut rng);
            c.truncate(keep);
            c
        } else {
            contents.clone()
        };
        model = GenerativeModel::fit(&train, cfg.refit.bandwidth, cfg.refit.shrink, clip)?;
    }
    Ok(out)
}
