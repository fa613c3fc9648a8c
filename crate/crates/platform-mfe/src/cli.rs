//! Command-line front end. Every command reads optional defaults from a
//! JSON config file; flags win over config fields.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::domain::{MarketParams, RevenueThresholdScheme};
use crate::error::{invalid, Result};
use crate::io::{cell, read_density, write_csv};
use crate::market::{pregenai_beta, pregenai_optimal, pregenai_profit};
use crate::mfe::{
    build_equilibrium, classify_scheme, default_sweep, interior_quantities, optimize_vstar, profit_at,
    profit_curve, verify_equilibrium, ClassifyOptions, EquilibriumSolution, Market, Residuals,
};
use crate::sim::{run_multiperiod, run_schemes, AbmConfig, ModelKnobs, MultiPeriodConfig};
use crate::twolevel::{
    twolevel_gstar, twolevel_gstar_residual, twolevel_profit, twolevel_quantities, twolevel_v0,
    twolevel_v0_residual, twolevel_wmin, TwoLevelConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "platform-mfe", version, about = "Content-platform equilibria with GenAI creators")]
pub struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files; without it the main result goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Build two-level markets on a grid of this many cells instead of atoms.
    #[arg(long, global = true)]
    pub grid_cells: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Manual production cost; defaults to 1 - gamma.
    #[arg(long)]
    pub cost: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MarketArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Consumer preference density (CSV `x,value` or JSON).
    #[arg(long)]
    pub p: Option<PathBuf>,
    /// GenAI density, same grid as `p`.
    #[arg(long)]
    pub g: Option<PathBuf>,
    /// Two-level market with this low GenAI density instead of files.
    #[arg(long)]
    pub g_low: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SchemeArgs {
    #[arg(long)]
    pub v_bar: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AbmArgs {
    #[arg(long)]
    pub n_agents: Option<usize>,
    #[arg(long)]
    pub n_bins: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[arg(long)]
    pub convergence_tv: Option<f64>,
    /// Training samples for the first GenAI model.
    #[arg(long)]
    pub train_samples: Option<usize>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub shrink: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Market without GenAI under a constant compensation.
    Pregenai {
        #[command(flatten)]
        params: ParamArgs,
        /// Report the equilibrium at this compensation as well as the optimum.
        #[arg(long)]
        w_const: Option<f64>,
    },
    /// Equilibrium at a threshold; with `--w`, the full case analysis.
    Solve {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        assume_large_w: bool,
    },
    /// Classification of a `(v_bar, w)` scheme.
    Classify {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        assume_large_w: bool,
    },
    /// Revenue and profit over a threshold sweep, as CSV.
    Curve {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        n_points: Option<usize>,
    },
    /// Profit-maximizing threshold.
    Optimize {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        grid_points: Option<usize>,
    },
    /// Closed forms for the two-level market.
    Twolevel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        g_low: Option<f64>,
        #[arg(long)]
        v_bar: Option<f64>,
    },
    /// One simulated period per scheme.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        abm: AbmArgs,
    },
    /// Repeated periods with the GenAI model retrained on past contents.
    Multiperiod {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        abm: AbmArgs,
        #[arg(long)]
        periods: Option<usize>,
        #[arg(long)]
        refit_bandwidth: Option<f64>,
        #[arg(long)]
        refit_shrink: Option<f64>,
    },
    /// Residuals of a stored solution against a market.
    Verify {
        #[command(flatten)]
        market: MarketArgs,
        /// JSON written by `solve`.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

/// Defaults for any flag, read from `--config`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub grid_cells: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub cost: Option<f64>,
    pub p: Option<PathBuf>,
    pub g: Option<PathBuf>,
    pub g_low: Option<f64>,
    pub v_bar: Option<f64>,
    pub w: Option<f64>,
    pub w_const: Option<f64>,
    pub assume_large_w: Option<bool>,
    pub n_points: Option<usize>,
    pub grid_points: Option<usize>,
    /// `[v_bar, w]` pairs for `simulate`.
    pub schemes: Option<Vec<[f64; 2]>>,
    pub n_agents: Option<usize>,
    pub n_bins: Option<usize>,
    pub max_rounds: Option<usize>,
    pub convergence_tv: Option<f64>,
    pub train_samples: Option<usize>,
    pub bandwidth: Option<f64>,
    pub shrink: Option<f64>,
    pub periods: Option<usize>,
    pub refit_bandwidth: Option<f64>,
    pub refit_shrink: Option<f64>,
    pub solution: Option<PathBuf>,
}

/// How a command finished when it did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotConverged,
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::NotConverged) => {
            eprintln!("warning: simulation did not converge within max_rounds; results were still written");
            EXIT_NOT_CONVERGED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    seed: u64,
    out: Option<PathBuf>,
    grid_cells: Option<usize>,
}

impl Ctx {
    /// Writes `body` to `out/name`, or to stdout when there is no `--out`.
    fn emit(&self, name: &str, body: &str) -> Result<()> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(name), body)?;
            }
            None => print!("{body}"),
        }
        Ok(())
    }

    /// Writes a side file only when `--out` is given.
    fn side_file(&self, name: &str, body: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), body)?;
        }
        Ok(())
    }

    fn params(&self, a: &ParamArgs) -> Result<MarketParams> {
        let alpha = a.alpha.or(self.cfg.alpha).unwrap_or(0.5);
        let gamma = a.gamma.or(self.cfg.gamma).unwrap_or(0.85);
        let cost = a.cost.or(self.cfg.cost).unwrap_or(1.0 - gamma);
        MarketParams::new(alpha, gamma, cost)
    }

    fn market(&self, m: &MarketArgs) -> Result<Market> {
        let params = self.params(&m.params)?;
        let p = m.p.clone().or(self.cfg.p.clone());
        let g = m.g.clone().or(self.cfg.g.clone());
        match (p, g) {
            (Some(p), Some(g)) => Market::from_densities(&read_density(&p)?, &read_density(&g)?, params),
            (Some(_), None) | (None, Some(_)) => invalid("--p and --g must be given together"),
            (None, None) => {
                let Some(g_low) = m.g_low.or(self.cfg.g_low) else {
                    return invalid("give density files with --p/--g or a two-level market with --g-low");
                };
                if params.alpha != 0.5 {
                    return invalid("two-level markets need alpha = 0.5");
                }
                let tl = TwoLevelConfig::with_cost(g_low, params.gamma, params.cost)?;
                match self.grid_cells {
                    Some(n) => tl.grid_market(n),
                    None => tl.atoms_market(),
                }
            }
        }
    }

    fn scheme(&self, s: &SchemeArgs, default: Option<(f64, f64)>) -> Result<RevenueThresholdScheme> {
        let v = s.v_bar.or(self.cfg.v_bar).or(default.map(|d| d.0));
        let w = s.w.or(self.cfg.w).or(default.map(|d| d.1));
        match (v, w) {
            (Some(v), Some(w)) => RevenueThresholdScheme::new(v, w),
            _ => invalid("a scheme needs --v-bar and --w"),
        }
    }

    fn abm(&self, a: &AbmArgs, scheme: RevenueThresholdScheme) -> Result<AbmConfig> {
        let base = AbmConfig::reference(scheme, self.seed);
        let cfg = AbmConfig {
            n_agents: a.n_agents.or(self.cfg.n_agents).unwrap_or(base.n_agents),
            n_bins: a.n_bins.or(self.cfg.n_bins).unwrap_or(base.n_bins),
            max_rounds: a.max_rounds.or(self.cfg.max_rounds).unwrap_or(base.max_rounds),
            convergence_tv: a.convergence_tv.or(self.cfg.convergence_tv).unwrap_or(base.convergence_tv),
            ..base
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(RunConfig::default()),
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let cfg = load_config(cli.config.as_deref())?;
    let ctx = Ctx {
        seed: cli.seed.or(cfg.seed).unwrap_or(1),
        out: cli.out.clone().or(cfg.out.clone()),
        grid_cells: cli.grid_cells.or(cfg.grid_cells),
        cfg,
    };
    match &cli.command {
        Command::Pregenai { params, w_const } => cmd_pregenai(&ctx, params, *w_const),
        Command::Solve { market, scheme, assume_large_w } => cmd_solve(&ctx, market, scheme, *assume_large_w),
        Command::Classify { market, scheme, assume_large_w } => cmd_classify(&ctx, market, scheme, *assume_large_w),
        Command::Curve { market, n_points } => cmd_curve(&ctx, market, *n_points),
        Command::Optimize { market, grid_points } => cmd_optimize(&ctx, market, *grid_points),
        Command::Twolevel { params, g_low, v_bar } => cmd_twolevel(&ctx, params, *g_low, *v_bar),
        Command::Simulate { scheme, abm } => cmd_simulate(&ctx, scheme, abm),
        Command::Multiperiod { scheme, abm, periods, refit_bandwidth, refit_shrink } => {
            cmd_multiperiod(&ctx, scheme, abm, *periods, *refit_bandwidth, *refit_shrink)
        }
        Command::Verify { market, solution } => cmd_verify(&ctx, market, solution.as_deref()),
    }
}

#[derive(Serialize)]
struct PregenaiAt {
    w: f64,
    beta_h: f64,
    profit: f64,
}

#[derive(Serialize)]
struct PregenaiReport {
    params: MarketParams,
    w_star: f64,
    profit_star: f64,
    beta_h_star: f64,
    at_w: Option<PregenaiAt>,
}

fn cmd_pregenai(ctx: &Ctx, params: &ParamArgs, w_const: Option<f64>) -> Result<Outcome> {
    let params = ctx.params(params)?;
    let (w_star, profit_star) = pregenai_optimal(&params);
    let at_w = match w_const.or(ctx.cfg.w_const) {
        Some(w) if !(w >= 0.0) => return invalid(format!("compensation must be nonnegative, got {w}")),
        Some(w) => Some(PregenaiAt { w, beta_h: pregenai_beta(&params, w), profit: pregenai_profit(&params, w) }),
        None => None,
    };
    let report = PregenaiReport { params, w_star, profit_star, beta_h_star: pregenai_beta(&params, w_star), at_w };
    ctx.emit("pregenai.json", &json(&report)?)?;
    Ok(Outcome::Done)
}

/// What `solve` writes and `verify` reads back.
#[derive(Debug, Serialize, Deserialize)]
pub struct SolveDoc {
    pub solution: EquilibriumSolution,
    pub residuals: Option<Residuals>,
}

fn classify_opts(ctx: &Ctx, flag: bool) -> ClassifyOptions {
    ClassifyOptions { assume_large_w: flag || ctx.cfg.assume_large_w.unwrap_or(false), ..Default::default() }
}

fn solve(ctx: &Ctx, market: &Market, s: &SchemeArgs, large_w: bool) -> Result<EquilibriumSolution> {
    let v_bar = s.v_bar.or(ctx.cfg.v_bar);
    let w = s.w.or(ctx.cfg.w);
    match (v_bar, w) {
        (None, _) => invalid("--v-bar is required"),
        (Some(v), None) => build_equilibrium(market, v),
        (Some(v), Some(w)) => {
            Ok(classify_scheme(market, RevenueThresholdScheme::new(v, w)?, classify_opts(ctx, large_w)))
        }
    }
}

fn cmd_solve(ctx: &Ctx, m: &MarketArgs, s: &SchemeArgs, large_w: bool) -> Result<Outcome> {
    let market = ctx.market(m)?;
    let solution = solve(ctx, &market, s, large_w)?;
    let residuals = match solution.state {
        Some(_) => Some(verify_equilibrium(&market, &solution)?),
        None => None,
    };
    ctx.emit("solution.json", &json(&SolveDoc { solution, residuals })?)?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct ClassifyReport {
    v_bar: f64,
    w: f64,
    classification: String,
    v_tilde: Option<f64>,
    w_tilde: Option<f64>,
    w_implied: Option<f64>,
    w_paid: f64,
    genai_mass: Option<f64>,
    boundary_tie: bool,
    assumed_large_w: bool,
}

fn cmd_classify(ctx: &Ctx, m: &MarketArgs, s: &SchemeArgs, large_w: bool) -> Result<Outcome> {
    let market = ctx.market(m)?;
    let scheme = ctx.scheme(s, None)?;
    let sol = classify_scheme(&market, scheme, classify_opts(ctx, large_w));
    let (v_tilde, w_tilde) = match sol.classification {
        crate::mfe::Classification::Reducible { v_tilde, w_tilde } => (Some(v_tilde), Some(w_tilde)),
        _ => (None, None),
    };
    let report = ClassifyReport {
        v_bar: scheme.v_bar,
        w: scheme.w,
        classification: sol.classification.label().to_string(),
        v_tilde,
        w_tilde,
        w_implied: sol.quantities.map(|q| q.w_implied),
        w_paid: sol.w_paid,
        genai_mass: sol.state.as_ref().map(|s| s.genai_mass),
        boundary_tie: sol.boundary_tie,
        assumed_large_w: sol.assumed_large_w,
    };
    ctx.emit("classify.json", &json(&report)?)?;
    Ok(Outcome::Done)
}

fn cmd_curve(ctx: &Ctx, m: &MarketArgs, n_points: Option<usize>) -> Result<Outcome> {
    let market = ctx.market(m)?;
    let n = n_points.or(ctx.cfg.n_points).unwrap_or(200);
    if n == 0 {
        return invalid("n_points must be positive");
    }
    let points = profit_curve(&market, &default_sweep(&market, n))?;
    let mut buf = Vec::new();
    write_csv(
        &mut buf,
        &["v_bar", "w", "R", "Pi", "classification"],
        points.iter().map(|p| vec![cell(p.v_bar), cell(p.w), cell(p.revenue), cell(p.profit), p.regime.label().into()]),
    )?;
    ctx.emit("curve.csv", &String::from_utf8_lossy(&buf))?;
    Ok(Outcome::Done)
}

fn cmd_optimize(ctx: &Ctx, m: &MarketArgs, grid_points: Option<usize>) -> Result<Outcome> {
    let market = ctx.market(m)?;
    let opt = optimize_vstar(&market, grid_points.or(ctx.cfg.grid_points).unwrap_or(512))?;
    ctx.emit("optimize.json", &json(&opt)?)?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct TwoLevelAt {
    v_bar: f64,
    r_bar: f64,
    m_g: f64,
    m_p: f64,
    v_tilde: f64,
    w: f64,
    revenue: f64,
    profit: f64,
    /// Largest gap to the generic solver on the same market.
    solver_gap: f64,
}

#[derive(Serialize)]
struct TwoLevelReport {
    config: TwoLevelConfig,
    g_high: f64,
    g_star: f64,
    g_star_residual: f64,
    v0: Option<f64>,
    v0_residual: Option<f64>,
    w_min: Option<f64>,
    at: Option<TwoLevelAt>,
}

fn cmd_twolevel(ctx: &Ctx, params: &ParamArgs, g_low: Option<f64>, v_bar: Option<f64>) -> Result<Outcome> {
    let p = ctx.params(params)?;
    if p.alpha != 0.5 {
        return invalid("two-level closed forms need alpha = 0.5");
    }
    let Some(g_low) = g_low.or(ctx.cfg.g_low) else {
        return invalid("--g-low is required");
    };
    let tl = TwoLevelConfig::with_cost(g_low, p.gamma, p.cost)?;
    let g_star = twolevel_gstar(&p)?;
    let v0 = twolevel_v0(&tl).ok();
    let at = match v_bar.or(ctx.cfg.v_bar) {
        None => None,
        Some(v) => {
            let q = twolevel_quantities(&tl, v)?;
            let (revenue, profit) = twolevel_profit(&tl, v)?;
            let market = match ctx.grid_cells {
                Some(n) => tl.grid_market(n)?,
                None => tl.atoms_market()?,
            };
            let g = interior_quantities(market.ratio_distribution(), v, market.params())?;
            let mut solver_gap = [(q.r_bar, g.r_bar), (q.m_g, g.m_g), (q.m_p, g.m_p), (q.v_tilde, g.v_tilde)]
                .iter()
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if let Ok(r) = profit_at(&market, v) {
                if r.regime == crate::mfe::Regime::Interior {
                    solver_gap = solver_gap.max((r.profit - profit).abs()).max((r.revenue - revenue).abs());
                }
            }
            Some(TwoLevelAt {
                v_bar: v,
                r_bar: q.r_bar,
                m_g: q.m_g,
                m_p: q.m_p,
                v_tilde: q.v_tilde,
                w: q.w_implied,
                revenue,
                profit,
                solver_gap,
            })
        }
    };
    let report = TwoLevelReport {
        config: tl,
        g_high: tl.g_high(),
        g_star,
        g_star_residual: twolevel_gstar_residual(&p, g_star),
        v0,
        v0_residual: v0.map(|v| twolevel_v0_residual(&tl, v)),
        w_min: (v0.is_none() && g_low > 0.0).then(|| twolevel_wmin(&tl)),
        at,
    };
    ctx.emit("twolevel.json", &json(&report)?)?;
    Ok(Outcome::Done)
}

fn model_knobs(ctx: &Ctx, a: &AbmArgs, default: ModelKnobs) -> ModelKnobs {
    ModelKnobs {
        bandwidth: a.bandwidth.or(ctx.cfg.bandwidth).unwrap_or(default.bandwidth),
        shrink: a.shrink.or(ctx.cfg.shrink).unwrap_or(default.shrink),
        train_samples: a.train_samples.or(ctx.cfg.train_samples).unwrap_or(default.train_samples),
    }
}

/// Single-period model: a small training set, narrow kernels.
pub const TABLE_MODEL: ModelKnobs = ModelKnobs { bandwidth: 0.3, shrink: 0.6, train_samples: 2650 };

/// Schemes run by `simulate` when none are given.
pub const TABLE_SCHEMES: [(f64, f64); 3] = [(0.110, 0.0), (0.110, 0.150), (0.105, 0.150)];

#[derive(Serialize)]
struct SimulateSidecar<'a> {
    period: &'a AbmConfig,
    model: ModelKnobs,
    schemes: &'a [RevenueThresholdScheme],
}

fn cmd_simulate(ctx: &Ctx, s: &SchemeArgs, a: &AbmArgs) -> Result<Outcome> {
    let schemes: Vec<RevenueThresholdScheme> = if s.v_bar.is_some() || s.w.is_some() {
        vec![ctx.scheme(s, None)?]
    } else if let Some(list) = &ctx.cfg.schemes {
        list.iter().map(|[v, w]| RevenueThresholdScheme::new(*v, *w)).collect::<Result<_>>()?
    } else if ctx.cfg.v_bar.is_some() || ctx.cfg.w.is_some() {
        vec![ctx.scheme(s, None)?]
    } else {
        TABLE_SCHEMES.iter().map(|&(v, w)| RevenueThresholdScheme { v_bar: v, w }).collect()
    };
    if schemes.is_empty() {
        return invalid("no schemes to simulate");
    }
    let base = ctx.abm(a, schemes[0])?;
    let knobs = model_knobs(ctx, a, TABLE_MODEL);
    let records = run_schemes(&base, &knobs, &schemes)?;
    let mut buf = Vec::new();
    write_csv(
        &mut buf,
        &["v_bar", "w", "R", "Pi", "manual_fraction", "genai_expected_revenue", "rounds_used", "converged"],
        schemes.iter().zip(&records).map(|(s, r)| {
            vec![
                cell(s.v_bar),
                cell(s.w),
                cell(r.revenue),
                cell(r.profit),
                cell(r.manual_fraction),
                cell(r.genai_expected_revenue),
                r.rounds_used.to_string(),
                r.converged.to_string(),
            ]
        }),
    )?;
    ctx.emit("simulate.csv", &String::from_utf8_lossy(&buf))?;
    ctx.side_file("config.json", &json(&SimulateSidecar { period: &base, model: knobs, schemes: &schemes })?)?;
    Ok(if records.iter().all(|r| r.converged) { Outcome::Done } else { Outcome::NotConverged })
}

#[derive(Serialize)]
struct MultiSummary {
    collapsed: bool,
    total_profit: f64,
    periods: usize,
}

fn cmd_multiperiod(
    ctx: &Ctx,
    s: &SchemeArgs,
    a: &AbmArgs,
    periods: Option<usize>,
    refit_bandwidth: Option<f64>,
    refit_shrink: Option<f64>,
) -> Result<Outcome> {
    let scheme = ctx.scheme(s, Some((0.110, 0.0)))?;
    let period = ctx.abm(a, scheme)?;
    let mut cfg = MultiPeriodConfig::reference(period);
    cfg.periods = periods.or(ctx.cfg.periods).unwrap_or(cfg.periods);
    cfg.initial_model = model_knobs(ctx, a, cfg.initial_model);
    cfg.refit.bandwidth = refit_bandwidth.or(ctx.cfg.refit_bandwidth).unwrap_or(cfg.refit.bandwidth);
    cfg.refit.shrink = refit_shrink.or(ctx.cfg.refit_shrink).unwrap_or(cfg.refit.shrink);
    cfg.refit.train_samples = cfg.period.n_agents;
    let out = run_multiperiod(&cfg)?;

    let mut buf = Vec::new();
    write_csv(
        &mut buf,
        &["t", "R", "Pi", "manual_fraction", "central_mass", "modal_mass", "tv_to_p"],
        out.iter().map(|r| {
            vec![
                r.t.to_string(),
                cell(r.revenue),
                cell(r.profit),
                cell(r.manual_fraction),
                cell(r.metrics.central_mass),
                cell(r.metrics.modal_mass),
                cell(r.metrics.tv_to_p),
            ]
        }),
    )?;
    ctx.emit("periods.csv", &String::from_utf8_lossy(&buf))?;
    let grid = cfg.period.grid();
    for r in &out {
        let mut h = Vec::new();
        write_csv(
            &mut h,
            &["x", "count"],
            grid.centers().into_iter().zip(&r.content_hist).map(|(x, c)| vec![cell(x), c.to_string()]),
        )?;
        ctx.side_file(&format!("hist_t{:02}.csv", r.t), &String::from_utf8_lossy(&h))?;
    }
    let (first, last) = (&out[0].metrics, &out[out.len() - 1].metrics);
    let summary = MultiSummary {
        collapsed: last.tv_to_p > first.tv_to_p && last.central_mass > first.central_mass,
        total_profit: out.iter().map(|r| r.profit).sum(),
        periods: out.len(),
    };
    ctx.side_file("config.json", &json(&cfg)?)?;
    ctx.side_file("summary.json", &json(&summary)?)?;
    if ctx.out.is_some() {
        print!("{}", json(&summary)?);
    }
    Ok(if out.iter().all(|r| r.converged) { Outcome::Done } else { Outcome::NotConverged })
}

fn cmd_verify(ctx: &Ctx, m: &MarketArgs, solution: Option<&Path>) -> Result<Outcome> {
    let Some(path) = solution.map(Path::to_path_buf).or(ctx.cfg.solution.clone()) else {
        return invalid("--solution is required");
    };
    let market = ctx.market(m)?;
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let sol: EquilibriumSolution = match value.get("solution") {
        Some(inner) => serde_json::from_value(inner.clone())?,
        None => serde_json::from_value(value)?,
    };
    let residuals = verify_equilibrium(&market, &sol)?;
    ctx.emit("verify.json", &json(&residuals)?)?;
    Ok(Outcome::Done)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["platform-mfe", "solve", "--g-low", "0.2", "--v-bar", "0.16", "--seed", "4"])
            .unwrap();
        assert_eq!(cli.seed, Some(4));
        assert!(matches!(cli.command, Command::Solve { .. }));
    }

    #[test]
    fn unknown_config_field_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"gama": 0.9}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"gamma": 0.9, "schemes": [[0.11, 0.0]]}"#).unwrap();
        assert_eq!(c.gamma, Some(0.9));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["platform-mfe", "pregenai", "--cost", "-1"]), EXIT_INVALID);
        assert_eq!(main_with_args(["platform-mfe", "nope"]), EXIT_INVALID);
        assert_eq!(main_with_args(["platform-mfe", "solve", "--v-bar", "0.16"]), EXIT_INVALID);
    }
}
