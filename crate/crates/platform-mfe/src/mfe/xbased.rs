use serde::{Deserialize, Serialize};

use super::Market;
use crate::domain::{RevenueThresholdScheme, XBasedScheme};
use crate::error::{invalid, Result};
use crate::numeric::ksum;

/// Compensation fed to the fixed-point iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompensationRule {
    /// Fixed per-cell payment.
    XBased(XBasedScheme),
    /// `w 1[V ≥ v̄]`, re-evaluated on the current iterate.
    Threshold(RevenueThresholdScheme),
}

impl CompensationRule {
    fn eval(&self, v: &[f64], out: &mut [f64]) {
        match self {
            CompensationRule::XBased(s) => out.copy_from_slice(&s.values),
            CompensationRule::Threshold(s) => {
                for (o, &vi) in out.iter_mut().zip(v) {
                    *o = s.bonus(vi);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptions {
    /// Clip floors, strictly decreasing.
    pub delta_schedule: Vec<f64>,
    pub damping: f64,
    pub tol: f64,
    /// Total iteration budget, split evenly across the schedule.
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self { delta_schedule: vec![1e-2, 1e-3, 1e-4, 0.0], damping: 0.5, tol: 1e-10, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub beta_ai: Vec<f64>,
    /// Content heights.
    pub q: Vec<f64>,
    /// Raw creator revenue per cell.
    pub v: Vec<f64>,
    pub compensation: Vec<f64>,
    pub genai_mass: f64,
    /// Max-norm step of the last iteration.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Damped clip iteration on `(β, V)`. Non-convergence is reported through
/// `converged` and `residual`, never as an error.
pub fn solve_xbased(market: &Market, rule: &CompensationRule, opts: &FixedPointOptions) -> Result<FixedPointResult> {
    if let CompensationRule::XBased(s) = rule {
        market.check_cells(s.values.len(), "compensation")?;
    }
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return invalid(format!("damping must lie in (0,1], got {}", opts.damping));
    }
    let sched = &opts.delta_schedule;
    if sched.is_empty() || sched.iter().any(|d| !(*d >= 0.0)) || sched.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("delta schedule must be nonnegative and strictly decreasing");
    }

    let params = market.params();
    let (share, a, c, d) = (params.share(), params.alpha, params.cost, opts.damping);
    let p = market.p_mass();
    let g = market.g_mass();
    let n = market.n_cells();
    // g/p = 1/r per cell
    let inv_r: Vec<f64> = p.iter().zip(g).map(|(p, g)| g / p).collect();
    let v_of = |beta: &[f64], b: f64, out: &mut Vec<f64>| {
        out.clear();
        out.extend(beta.iter().zip(&inv_r).map(|(bi, ir)| share * (1.0 - bi + b * ir).powf(-a)));
    };
    let mass = |beta: &[f64]| ksum(beta.iter().zip(p).map(|(b, p)| b * p));

    let mut beta = vec![1.0; n];
    let mut b = mass(&beta);
    let mut v = Vec::with_capacity(n);
    v_of(&beta, b, &mut v);
    let mut w = vec![0.0; n];
    let mut beta_t = vec![0.0; n];
    let mut v_t = Vec::with_capacity(n);
    let per_stage = (opts.max_iter / sched.len()).max(1);
    let mut iterations = 0;
    let mut residual = f64::INFINITY;

    for &delta in sched {
        for _ in 0..per_stage {
            iterations += 1;
            rule.eval(&v, &mut w);
            let vg = ksum(g.iter().zip(v.iter().zip(&w)).map(|(g, (v, w))| g * (v + w)));
            for i in 0..n {
                let den = (vg + c - w[i]).max(delta);
                let need = if den > 0.0 { (share / den).powf(1.0 / a) } else { f64::INFINITY };
                beta_t[i] = (1.0 + b * inv_r[i] - need).clamp(delta, 1.0);
            }
            let b_t = mass(&beta_t);
            v_of(&beta_t, b_t, &mut v_t);
            residual = beta_t
                .iter()
                .zip(&beta)
                .map(|(x, y)| (x - y).abs())
                .chain(v_t.iter().zip(&v).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            for i in 0..n {
                beta[i] = (1.0 - d) * beta[i] + d * beta_t[i];
                v[i] = (1.0 - d) * v[i] + d * v_t[i];
            }
            b = mass(&beta);
            if residual <= opts.tol {
                break;
            }
        }
    }

    // report the state implied by the final β, not the damped V
    v_of(&beta, b, &mut v);
    rule.eval(&v, &mut w);
    let q_mass: Vec<f64> = beta.iter().zip(p.iter().zip(g)).map(|(bi, (p, g))| (1.0 - bi) * p + g * b).collect();
    Ok(FixedPointResult {
        q: market.heights(&q_mass),
        beta_ai: beta,
        v,
        compensation: w,
        genai_mass: b,
        converged: residual <= opts.tol,
        residual,
        iterations,
    })
}
