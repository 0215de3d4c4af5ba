//! Monte Carlo engines: price paths, the conditional (mixing) estimator,
//! drifted Volterra paths, hitting-probability ladders, and the variational
//! moment lower bound.
//!
//! Everything here is reproducible from (master seed, path index) and
//! invariant to the worker count: paths are mapped in fixed-size blocks and
//! reduced in block order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::gauss::{
    build_joint_factor, build_y_factor, sample_joint_path_signed, sample_y_path_signed, Grid,
    YFactor,
};
use crate::model::ModelParams;
use crate::stats::{summarize, wilson_interval, Z_95};
use crate::vol::SIGMA_SAT;
use crate::volterra::BlowUpReport;

/// Fixed parallel work unit; reductions combine blocks in index order.
const ACCUM_BLOCK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(try_from = "MCConfigRepr")]
pub struct MCConfig {
    pub n_paths: u64,
    pub grid: Grid,
    pub master_seed: u64,
    /// A path is flagged exploded once it exceeds this value.
    pub explosion_cap: f64,
    /// Pair paths as (stream k, stream k mirrored) instead of independent
    /// streams; halves the number of distinct noise draws.
    pub antithetic: bool,
}

#[derive(serde::Deserialize)]
struct MCConfigRepr {
    n_paths: u64,
    grid: Grid,
    master_seed: u64,
    explosion_cap: f64,
    #[serde(default)]
    antithetic: bool,
}

impl TryFrom<MCConfigRepr> for MCConfig {
    type Error = CoreError;
    fn try_from(r: MCConfigRepr) -> Result<Self> {
        let cfg = MCConfig {
            n_paths: r.n_paths,
            grid: r.grid,
            master_seed: r.master_seed,
            explosion_cap: r.explosion_cap,
            antithetic: r.antithetic,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl MCConfig {
    pub fn new(
        n_paths: u64,
        grid: Grid,
        master_seed: u64,
        explosion_cap: f64,
        antithetic: bool,
    ) -> Result<Self> {
        let cfg = MCConfig { n_paths, grid, master_seed, explosion_cap, antithetic };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(CoreError::Domain("need at least one path".into()));
        }
        if self.explosion_cap.is_nan() || self.explosion_cap <= 0.0 {
            return Err(CoreError::Domain(format!(
                "explosion cap must be positive, got {}",
                self.explosion_cap
            )));
        }
        Ok(())
    }

    /// Stream index and mirror flag for one path under the antithetic pairing.
    fn stream_of(&self, path: u64) -> (u64, bool) {
        if self.antithetic {
            (path / 2, path % 2 == 1)
        } else {
            (path, false)
        }
    }
}

/// Point estimate with normal and (for proportions) Wilson intervals.
#[derive(Debug, Clone, Serialize)]
pub struct MCResult {
    pub mean: f64,
    pub std_error: f64,
    /// mean ± 1.96·std_error.
    pub ci95: (f64, f64),
    pub n_paths: u64,
    pub n_exploded: u64,
    /// Present only when the estimand is a probability.
    pub wilson95: Option<(f64, f64)>,
    pub config: MCConfig,
}

impl MCResult {
    fn from_values(values: &[f64], n_exploded: u64, config: MCConfig) -> Result<MCResult> {
        let s = summarize(values)?;
        Ok(MCResult {
            mean: s.mean,
            std_error: s.std_error,
            ci95: s.ci95(),
            n_paths: values.len() as u64,
            n_exploded,
            wilson95: None,
            config,
        })
    }

    fn from_proportion(hits: u64, n_exploded: u64, config: MCConfig) -> Result<MCResult> {
        let n = config.n_paths;
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        Ok(MCResult {
            mean: p,
            std_error: se,
            ci95: (p - Z_95 * se, p + Z_95 * se),
            n_paths: n,
            n_exploded,
            wilson95: Some(wilson_interval(hits, n)?),
            config,
        })
    }
}

fn check_grid_matches_model(model: &ModelParams, mc: &MCConfig) -> Result<()> {
    if mc.grid.t_horizon() != model.horizon {
        return Err(CoreError::Domain(format!(
            "grid horizon {} differs from model horizon {}",
            mc.grid.t_horizon(),
            model.horizon
        )));
    }
    Ok(())
}

/// Maps path indices to per-path outputs in deterministic block order.
fn map_paths<T: Send, F: Fn(u64) -> T + Sync>(n_paths: u64, per_path: F) -> Vec<T> {
    let blocks: Vec<Vec<T>> = (0..n_paths.div_ceil(ACCUM_BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * ACCUM_BLOCK;
            let hi = ((b + 1) * ACCUM_BLOCK).min(n_paths);
            (lo..hi).map(&per_path).collect()
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// Terminal values and running maxima of the simulated price.
#[derive(Debug, Clone)]
pub struct PricePaths {
    pub terminal: Vec<f64>,
    pub running_max: Vec<f64>,
}

/// Log-Euler price scheme on exactly sampled joint (Y, W) paths:
/// ln S_{i+1} = ln S_i + σ(t_i, Y_{t_i})·ΔW_i − ½σ²(t_i, Y_{t_i})·Δt.
///
/// The left-point rule makes the discrete scheme an exact martingale at any
/// resolution, whatever the continuum object does — which is precisely why
/// the martingale defect is measured through hitting probabilities instead
/// of through sample means of S_T.
pub fn simulate_price_paths(model: &ModelParams, mc: &MCConfig) -> Result<PricePaths> {
    mc.validate()?;
    check_grid_matches_model(model, mc)?;
    let factor = build_joint_factor(model.kernel, model.rho, mc.grid)?;
    let n = mc.grid.n();
    let dt = mc.grid.dt();
    let pairs = map_paths(mc.n_paths, |p| {
        let (stream, negate) = mc.stream_of(p);
        let b = sample_joint_path_signed(&factor, mc.master_seed, stream, negate);
        let mut ln_s = model.s0.ln();
        let mut s_max = model.s0;
        for i in 0..n {
            let t = mc.grid.node(i);
            let sig = model.vol.eval_sigma(t, b.y[i]);
            let sig2 = model.vol.eval_sigma_sq(t, b.y[i]);
            ln_s += sig * b.dw[i] - 0.5 * sig2 * dt;
            let s = ln_s.exp();
            if s > s_max {
                s_max = s;
            }
        }
        (ln_s.exp(), s_max)
    });
    let (terminal, running_max) = pairs.into_iter().unzip();
    Ok(PricePaths { terminal, running_max })
}

/// Mean of terminal prices as an [`MCResult`].
pub fn price_terminal_estimate(model: &ModelParams, mc: &MCConfig) -> Result<MCResult> {
    let paths = simulate_price_paths(model, mc)?;
    MCResult::from_values(&paths.terminal, 0, *mc)
}

/// Conditional (mixing) estimator of E[S_T / S₀].
///
/// The price-specific Brownian component is integrated out analytically,
/// leaving exp(ρ·Σσ_iΔZ_i − ½ρ²·Σσ_i²Δt) along exactly sampled, pathwise
/// consistent (Y, Z) pairs. Because σ_i is measurable with respect to the Z
/// path up to t_i, the discrete expectation is exactly 1; the estimator is a
/// sanity harness and a variance-reduced S_T estimator, not a defect probe.
pub fn conditional_price_estimator(model: &ModelParams, mc: &MCConfig) -> Result<MCResult> {
    mc.validate()?;
    check_grid_matches_model(model, mc)?;
    // The (Y, Z) pair is the joint factor at full correlation: Z both drives
    // Y and plays the Brownian column, so bundle.dz is Z's own increments.
    let factor = build_joint_factor(model.kernel, 1.0, mc.grid)?;
    let n = mc.grid.n();
    let dt = mc.grid.dt();
    let rho = model.rho;
    let values = map_paths(mc.n_paths, |p| {
        let (stream, negate) = mc.stream_of(p);
        let b = sample_joint_path_signed(&factor, mc.master_seed, stream, negate);
        let mut expo = 0.0;
        for i in 0..n {
            let t = mc.grid.node(i);
            let sig = model.vol.eval_sigma(t, b.y[i]);
            let sig2 = model.vol.eval_sigma_sq(t, b.y[i]);
            expo += rho * sig * b.dz[i] - 0.5 * rho * rho * sig2 * dt;
        }
        expo.exp()
    });
    MCResult::from_values(&values, 0, *mc)
}

/// Drift layered onto the exact Gaussian path: d_j = coeff·σ(t_j, Y_j),
/// optionally capped, optionally switching coefficient once the driftless
/// path has touched a barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftSpec {
    pub coeff: f64,
    /// Caps the whole drift sample (not just σ) while the barrier is unhit.
    pub cap: Option<f64>,
    pub barrier: Option<Barrier>,
}

/// Barrier monitored node-wise on the driftless path Y⁰. From the first node
/// with Y⁰ ≥ level onwards, the drift uses `post_coeff` and ignores the cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Barrier {
    pub level: f64,
    pub post_coeff: f64,
}

impl DriftSpec {
    pub fn plain(coeff: f64) -> Self {
        DriftSpec { coeff, cap: None, barrier: None }
    }

    fn validate(&self) -> Result<()> {
        if !self.coeff.is_finite() {
            return Err(CoreError::Domain(format!("drift coefficient {} not finite", self.coeff)));
        }
        if let Some(c) = self.cap {
            if !c.is_finite() || c <= 0.0 {
                return Err(CoreError::Domain(format!("drift cap must be positive, got {c}")));
            }
        }
        if let Some(b) = self.barrier {
            if !b.level.is_finite() || b.level <= 0.0 {
                return Err(CoreError::Domain(format!(
                    "barrier level must be positive, got {}",
                    b.level
                )));
            }
            if !b.post_coeff.is_finite() {
                return Err(CoreError::Domain(format!(
                    "post-barrier coefficient {} not finite",
                    b.post_coeff
                )));
            }
        }
        Ok(())
    }
}

/// Everything one realized drifted path produces.
struct PathRun {
    exploded: bool,
    /// Horizon when the path survives.
    t_explode: f64,
    /// Number of (sorted) levels first-hit; hits happen in level order.
    levels_hit: usize,
    level_times: Vec<Option<f64>>,
    /// Accumulated κ·σ²·Δt payoff (zero if the barrier was hit).
    payoff: f64,
    solution: Vec<f64>,
}

struct DriftedRunner<'a> {
    model: &'a ModelParams,
    drift: DriftSpec,
    levels: &'a [f64],
    /// Payoff rate multiplier κ; None skips payoff accounting.
    kappa: Option<f64>,
    keep_solution: bool,
    mc: MCConfig,
    factor: YFactor,
    weights: Vec<f64>,
}

impl<'a> DriftedRunner<'a> {
    fn new(
        model: &'a ModelParams,
        drift: DriftSpec,
        levels: &'a [f64],
        kappa: Option<f64>,
        keep_solution: bool,
        mc: MCConfig,
    ) -> Result<Self> {
        mc.validate()?;
        drift.validate()?;
        check_grid_matches_model(model, &mc)?;
        if levels.windows(2).any(|w| !(w[1] > w[0])) || levels.iter().any(|l| !l.is_finite()) {
            return Err(CoreError::Domain("levels must be finite and strictly increasing".into()));
        }
        let factor = build_y_factor(model.kernel, mc.grid)?;
        let weights = model.kernel.grid_weights(mc.grid.dt(), mc.grid.n());
        Ok(DriftedRunner { model, drift, levels, kappa, keep_solution, mc, factor, weights })
    }

    fn run(&self, path: u64) -> PathRun {
        let (stream, negate) = self.mc.stream_of(path);
        let y0 = sample_y_path_signed(&self.factor, self.mc.master_seed, stream, negate);
        self.run_on(&y0)
    }

    /// Solves the drifted recursion Y_i = Y⁰_i + Σ_{j<i} w_{i−j}·d_j on one
    /// driftless path. Payoff terms accumulate once per step in node order,
    /// so pathwise payoff comparisons under common noise are exact.
    fn run_on(&self, y0: &[f64]) -> PathRun {
        let grid = self.mc.grid;
        let n = grid.n();
        let dt = grid.dt();
        let vol = &self.model.vol;
        let theta_node = self
            .drift
            .barrier
            .and_then(|b| (0..=n).find(|&i| y0[i] >= b.level));
        let barrier_hit = theta_node.is_some();

        let mut run = PathRun {
            exploded: false,
            t_explode: grid.t_horizon(),
            levels_hit: 0,
            level_times: vec![None; self.levels.len()],
            payoff: 0.0,
            solution: Vec::new(),
        };
        if self.keep_solution {
            run.solution.reserve(n + 1);
            run.solution.push(0.0);
        }
        let record = |run: &mut PathRun, node: usize, y: f64| {
            while run.levels_hit < self.levels.len() && y >= self.levels[run.levels_hit] {
                run.level_times[run.levels_hit] = Some(grid.node(node));
                run.levels_hit += 1;
            }
        };
        record(&mut run, 0, 0.0);

        let kappa = self.kappa.filter(|_| !barrier_hit);
        let mut d = Vec::with_capacity(n);
        let mut y = 0.0;
        for j in 0..n {
            if let Some(k) = kappa {
                let rate = if run.exploded { SIGMA_SAT } else { vol.eval_sigma_sq(grid.node(j), y) };
                run.payoff += k * rate * dt;
            }
            if run.exploded {
                continue;
            }
            let sigma = vol.eval_sigma(grid.node(j), y);
            let pre_barrier = theta_node.is_none_or(|tn| j <= tn);
            let dj = if pre_barrier {
                let raw = self.drift.coeff * sigma;
                self.drift.cap.map_or(raw, |c| raw.min(c))
            } else {
                self.drift.barrier.expect("post-barrier branch").post_coeff * sigma
            };
            d.push(dj);
            let mut acc = 0.0;
            for l in 0..=j {
                acc += self.weights[j - l] * d[l];
            }
            let y_next = y0[j + 1] + acc;
            if self.keep_solution {
                run.solution.push(y_next);
            }
            record(&mut run, j + 1, y_next);
            if y_next > self.mc.explosion_cap {
                run.exploded = true;
                run.t_explode = grid.node(j + 1);
            }
            y = y_next;
        }
        run
    }

    fn map<T: Send, F: Fn(PathRun) -> T + Sync>(&self, f: F) -> Vec<T>
    where
        Self: Sync,
    {
        map_paths(self.mc.n_paths, |p| f(self.run(p)))
    }
}

/// Simulates paths of the drifted Volterra SDE and reports each path's
/// explosion status, first-hit times of the requested levels, and solution.
///
/// Solutions are stored in full: at large path counts prefer the aggregated
/// front-ends ([`martingale_defect`], [`boue_dupuis_lower_bound`]) which
/// stream the same recursion without keeping paths.
pub fn drifted_volterra_paths(
    model: &ModelParams,
    drift: &DriftSpec,
    levels: &[f64],
    mc: &MCConfig,
) -> Result<Vec<BlowUpReport>> {
    let runner = DriftedRunner::new(model, *drift, levels, None, true, *mc)?;
    let n = mc.grid.n();
    Ok(runner.map(|run| BlowUpReport {
        exploded: run.exploded,
        t_cap: run.t_explode,
        level_crossings: levels.iter().copied().zip(run.level_times).collect(),
        grid_steps: n,
        solution: run.solution,
    }))
}

/// Hitting-probability ladder under the drift-changed measure.
#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub levels: Vec<f64>,
    /// Step counts of the grids used (base and refinements).
    pub grids: Vec<usize>,
    /// hit_probs[g][l] estimates P̂(τ_{levels[l]} ≤ T) on grid g.
    pub hit_probs: Vec<Vec<MCResult>>,
    /// S₀ × hit probability at the largest level on the finest grid. No
    /// extrapolation in the level is performed; the ladder itself is the
    /// evidence.
    pub defect_estimate: f64,
}

/// Estimates the martingale defect S₀ − E[S_T] through its identity with
/// level-hitting probabilities under the changed measure, where the price
/// weight becomes the drift ρ·σ(t, Y) on the driving noise.
///
/// Ladders are produced on the base grid and one refinement. Within a grid,
/// hit probabilities are nonincreasing in the level exactly (same paths, and
/// a path reaches level n₂ > n₁ only after reaching n₁).
pub fn martingale_defect(model: &ModelParams, levels: &[f64], mc: &MCConfig) -> Result<DefectReport> {
    if levels.is_empty() {
        return Err(CoreError::Domain("need at least one level".into()));
    }
    if levels.iter().any(|&l| !(l > 0.0)) {
        return Err(CoreError::Domain("levels must be positive".into()));
    }
    let top = *levels.last().unwrap();
    if top > mc.explosion_cap {
        return Err(CoreError::Domain(format!(
            "largest level {top} exceeds the explosion cap {}; crossings above the cap are \
             not tracked",
            mc.explosion_cap
        )));
    }
    let drift = DriftSpec::plain(model.rho);
    let grids = [mc.grid, mc.grid.refined()];
    let mut hit_probs = Vec::with_capacity(grids.len());
    for grid in grids {
        let cfg = MCConfig { grid, ..*mc };
        let runner = DriftedRunner::new(model, drift, levels, None, false, cfg)?;
        let outcomes = runner.map(|run| (run.levels_hit, run.exploded));
        let n_exploded = outcomes.iter().filter(|o| o.1).count() as u64;
        let ladder: Vec<MCResult> = (0..levels.len())
            .map(|l| {
                let hits = outcomes.iter().filter(|o| o.0 > l).count() as u64;
                MCResult::from_proportion(hits, n_exploded, cfg)
            })
            .collect::<Result<_>>()?;
        hit_probs.push(ladder);
    }
    let defect_estimate = model.s0 * hit_probs.last().unwrap().last().unwrap().mean;
    Ok(DefectReport {
        levels: levels.to_vec(),
        grids: grids.iter().map(|g| g.n()).collect(),
        hit_probs,
        defect_estimate,
    })
}

/// Midpoint of the feasible control interval (−ρm, √(m²−m)).
///
/// Feasibility requires ρ² < (m−1)/m; the returned γ then satisfies both
/// ρm + γ > 0 and m² − m − γ² > 0 strictly (re-verified before returning).
pub fn choose_gamma(rho: f64, m: f64) -> Result<f64> {
    if !m.is_finite() || m <= 1.0 {
        return Err(CoreError::Domain(format!("moment order must exceed 1, got {m}")));
    }
    if !rho.is_finite() || !(-1.0..=0.0).contains(&rho) {
        return Err(CoreError::Domain(format!("correlation must lie in [-1, 0], got {rho}")));
    }
    let threshold = (m - 1.0) / m;
    if rho * rho >= threshold {
        return Err(CoreError::Infeasible(format!(
            "need ρ² < (m−1)/m for a feasible control: ρ² = {} ≥ {threshold}",
            rho * rho
        )));
    }
    let gamma = (-rho * m + (m * m - m).sqrt()) / 2.0;
    feasibility_check(rho, m, gamma)?;
    Ok(gamma)
}

fn feasibility_check(rho: f64, m: f64, gamma: f64) -> Result<()> {
    if !(rho * m + gamma > 0.0) {
        return Err(CoreError::Infeasible(format!(
            "control infeasible: ρm + γ = {} is not positive",
            rho * m + gamma
        )));
    }
    if !(m * m - m - gamma * gamma > 0.0) {
        return Err(CoreError::Infeasible(format!(
            "control infeasible: m² − m − γ² = {} is not positive",
            m * m - m - gamma * gamma
        )));
    }
    Ok(())
}

/// Parameters of the truncated feedback control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlConfig {
    pub m: f64,
    pub gamma: f64,
    pub cap_n: f64,
    pub barrier_a: f64,
}

impl ControlConfig {
    pub fn new(rho: f64, m: f64, gamma: f64, cap_n: f64, barrier_a: f64) -> Result<Self> {
        if !m.is_finite() || m <= 1.0 {
            return Err(CoreError::Domain(format!("moment order must exceed 1, got {m}")));
        }
        if !gamma.is_finite() {
            return Err(CoreError::Domain(format!("gamma must be finite, got {gamma}")));
        }
        feasibility_check(rho, m, gamma)?;
        if !cap_n.is_finite() || cap_n <= 0.0 {
            return Err(CoreError::Domain(format!("cap must be positive, got {cap_n}")));
        }
        if !barrier_a.is_finite() || barrier_a <= 0.0 {
            return Err(CoreError::Domain(format!("barrier must be positive, got {barrier_a}")));
        }
        Ok(ControlConfig { m, gamma, cap_n, barrier_a })
    }

    /// Convenience constructor taking γ from [`choose_gamma`].
    pub fn with_auto_gamma(rho: f64, m: f64, cap_n: f64, barrier_a: f64) -> Result<Self> {
        let gamma = choose_gamma(rho, m)?;
        ControlConfig::new(rho, m, gamma, cap_n, barrier_a)
    }

    fn payoff_rate(&self) -> f64 {
        (self.m * self.m - self.m - self.gamma * self.gamma) / 2.0
    }
}

/// Per-path values of the variational payoff
/// 1_{barrier unhit}·Σ ((m²−m−γ²)/2)·σ²(t_i, Y_i)·Δt
/// on the capped controlled path. Exposed so ladder monotonicity in the cap
/// can be checked pathwise under common random numbers.
pub fn boue_dupuis_payoffs(
    model: &ModelParams,
    ctrl: &ControlConfig,
    mc: &MCConfig,
) -> Result<Vec<f64>> {
    Ok(boue_dupuis_runs(model, ctrl, mc)?.into_iter().map(|(p, _)| p).collect())
}

fn boue_dupuis_runs(
    model: &ModelParams,
    ctrl: &ControlConfig,
    mc: &MCConfig,
) -> Result<Vec<(f64, bool)>> {
    feasibility_check(model.rho, ctrl.m, ctrl.gamma)?;
    let drift = DriftSpec {
        coeff: model.rho * ctrl.m + ctrl.gamma,
        cap: Some(ctrl.cap_n),
        barrier: Some(Barrier { level: ctrl.barrier_a, post_coeff: model.rho * ctrl.m }),
    };
    let runner = DriftedRunner::new(model, drift, &[], Some(ctrl.payoff_rate()), false, *mc)?;
    Ok(runner.map(|run| (run.payoff, run.exploded)))
}

/// Monte Carlo lower bound for ln E[S_T^m / S₀^m] from the variational
/// representation, using the capped feedback control with a barrier on the
/// driftless path.
///
/// Exploded paths keep their accumulated payoff and accrue the saturated
/// rate for the rest of the horizon: the true contribution is infinite, and
/// saturation preserves pathwise monotonicity in the cap while keeping the
/// estimate finite.
pub fn boue_dupuis_lower_bound(
    model: &ModelParams,
    ctrl: &ControlConfig,
    mc: &MCConfig,
) -> Result<MCResult> {
    let runs = boue_dupuis_runs(model, ctrl, mc)?;
    let n_exploded = runs.iter().filter(|r| r.1).count() as u64;
    let payoffs: Vec<f64> = runs.into_iter().map(|(p, _)| p).collect();
    MCResult::from_values(&payoffs, n_exploded, *mc)
}

/// E[(S_T ∧ c)^m] for every cap c, on one common set of price paths.
/// Estimates are nondecreasing in c pathwise by construction.
pub fn truncated_moment(
    model: &ModelParams,
    m: f64,
    caps: &[f64],
    mc: &MCConfig,
) -> Result<Vec<MCResult>> {
    if !m.is_finite() || m <= 0.0 {
        return Err(CoreError::Domain(format!("moment order must be positive, got {m}")));
    }
    if caps.is_empty() || caps.windows(2).any(|w| !(w[1] > w[0])) || !(caps[0] > 0.0) {
        return Err(CoreError::Domain(
            "caps must be positive and strictly increasing".into(),
        ));
    }
    let paths = simulate_price_paths(model, mc)?;
    caps.iter()
        .map(|&c| {
            let values: Vec<f64> = paths.terminal.iter().map(|&s| s.min(c).powf(m)).collect();
            MCResult::from_values(&values, 0, *mc)
        })
        .collect()
}
