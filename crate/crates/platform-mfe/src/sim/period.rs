use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{bin_revenue, histogram, GenerativeModel, MixtureSpec, ModelKnobs};
use crate::domain::{Grid, MarketParams, RevenueThresholdScheme};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbmConfig {
    /// Consumers, creators and contents per period.
    pub n_agents: usize,
    pub n_bins: usize,
    pub params: MarketParams,
    pub scheme: RevenueThresholdScheme,
    pub seed: u64,
    pub max_rounds: usize,
    pub convergence_tv: f64,
    /// Preference distribution of consumers and creators.
    pub mixture: MixtureSpec,
}

impl AbmConfig {
    /// `N = 26500`, 100 bins, `γ = 0.9`, `c = 0.1`, `α = ½`.
    pub fn reference(scheme: RevenueThresholdScheme, seed: u64) -> Self {
        Self {
            n_agents: 26_500,
            n_bins: 100,
            params: MarketParams { alpha: 0.5, gamma: 0.9, cost: 0.1 },
            scheme,
            seed,
            max_rounds: 50,
            convergence_tv: 0.01,
            mixture: MixtureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.mixture.validate()?;
        if self.n_bins == 0 || self.n_agents < self.n_bins {
            return invalid(format!("need n_agents >= n_bins > 0, got {} and {}", self.n_agents, self.n_bins));
        }
        if self.max_rounds == 0 || !(self.convergence_tv > 0.0) {
            return invalid("max_rounds and convergence_tv must be positive");
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.mixture.clip_lo, self.mixture.clip_hi, self.n_bins).expect("validated clip range")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub consumers: Vec<f64>,
    pub contents: Vec<f64>,
    pub content_hist: Vec<usize>,
    pub manual_fraction: f64,
    pub genai_expected_revenue: f64,
    pub revenue: f64,
    pub profit: f64,
    pub rounds_used: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Action {
    Unset,
    Manual,
    Ai,
}

/// One period of sequential best responses.
///
/// Consumers and creators are drawn once. Each round estimates the value of
/// a GenAI draw from fresh model samples, then visits creators in random
/// order; a creator withdraws their current content, compares the manual
/// payoff in their own bin against that estimate and posts again. A creator
/// who stays with GenAI keeps the draw they already have. Rounds stop once
/// successive content histograms are within `convergence_tv`.
pub fn run_period<R: Rng + ?Sized>(
    cfg: &AbmConfig,
    model: &GenerativeModel,
    initial_contents: &[f64],
    rng: &mut R,
) -> Result<PeriodRecord> {
    cfg.validate()?;
    let n = cfg.n_agents;
    if initial_contents.len() != n {
        return invalid(format!("need {n} initial contents, got {}", initial_contents.len()));
    }
    let grid = cfg.grid();
    let share = cfg.params.share();
    let (cost, scheme) = (cfg.params.cost, cfg.scheme);

    let consumers = cfg.mixture.sample(rng, n);
    let n_c: Vec<f64> = histogram(&consumers, &grid).into_iter().map(|c| c as f64).collect();
    let creators = cfg.mixture.sample(rng, n);
    let creator_bin: Vec<usize> = creators.iter().map(|&x| grid.cell_of(x)).collect();

    let mut pos = initial_contents.to_vec();
    let mut bin: Vec<usize> = pos.iter().map(|&x| grid.cell_of(x)).collect();
    let mut n_k = histogram(&pos, &grid);
    let mut action = vec![Action::Unset; n];
    // a creator's belief counts their own prospective content
    let belief = |nc: f64, nk: usize| {
        let raw = share * (nc / (nk as f64 + 1.0)).sqrt();
        raw + scheme.bonus(raw)
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut e_ai = 0.0;
    let mut rounds = 0;
    let mut converged = false;
    while rounds < cfg.max_rounds {
        rounds += 1;
        let prev = n_k.clone();
        e_ai = (0..n)
            .map(|_| {
                let b = grid.cell_of(model.sample_one(rng));
                belief(n_c[b], n_k[b])
            })
            .sum::<f64>()
            / n as f64;
        order.shuffle(rng);
        for &i in &order {
            n_k[bin[i]] -= 1;
            let b = creator_bin[i];
            if belief(n_c[b], n_k[b]) - cost > e_ai {
                action[i] = Action::Manual;
                pos[i] = creators[i];
            } else if action[i] != Action::Ai {
                action[i] = Action::Ai;
                pos[i] = model.sample_one(rng);
            }
            bin[i] = grid.cell_of(pos[i]);
            n_k[bin[i]] += 1;
        }
        let moved: usize = n_k.iter().zip(&prev).map(|(a, b)| a.abs_diff(*b)).sum();
        if 0.5 * moved as f64 / n as f64 <= cfg.convergence_tv {
            converged = true;
            break;
        }
    }

    let nf = n as f64;
    let gamma = cfg.params.gamma;
    let revenue = gamma * n_c.iter().zip(&n_k).map(|(&c, &k)| bin_revenue(c, k as f64)).sum::<f64>() / nf;
    let paid_contents: usize = n_c
        .iter()
        .zip(&n_k)
        .filter(|(_, &k)| k > 0)
        .filter(|(&c, &k)| share * (c / k as f64).sqrt() >= scheme.v_bar)
        .map(|(_, &k)| k)
        .sum();
    let paid = scheme.w * paid_contents as f64 / nf;
    let manual = action.iter().filter(|a| **a == Action::Manual).count() as f64 / nf;
    Ok(PeriodRecord {
        consumers,
        content_hist: n_k,
        contents: pos,
        manual_fraction: manual,
        genai_expected_revenue: e_ai,
        revenue,
        profit: revenue - paid,
        rounds_used: rounds,
        converged,
    })
}

/// Fits one model on fresh samples of the mixture, then runs a period for
/// each scheme from its own fresh initial contents. One RNG stream, seeded
/// from `base.seed`.
pub fn run_schemes(
    base: &AbmConfig,
    model: &ModelKnobs,
    schemes: &[RevenueThresholdScheme],
) -> Result<Vec<PeriodRecord>> {
    base.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(base.seed);
    let train = base.mixture.sample(&mut rng, model.train_samples);
    let clip = (base.mixture.clip_lo, base.mixture.clip_hi);
    let g = GenerativeModel::fit(&train, model.bandwidth, model.shrink, clip)?;
    schemes
        .iter()
        .map(|&scheme| {
            let cfg = AbmConfig { scheme, ..base.clone() };
            let init = cfg.mixture.sample(&mut rng, cfg.n_agents);
            run_period(&cfg, &g, &init, &mut rng)
        })
        .collect()
}
