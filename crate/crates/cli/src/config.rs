//! Per-subcommand run configurations.
//!
//! Each struct mirrors the core types it feeds; numeric validation happens in
//! the core constructors (via their serde detours or an explicit revalidation
//! here), so a config that deserializes and revalidates cleanly is runnable.
//! Unknown keys are rejected: a typo must fail loudly, not silently fall back
//! to a default.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use roughvol_core::{
    Grid, MCConfig, ModelParams, PowerKernel, VolterraProblem,
};

use crate::CliError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config { path: shown.clone(), message: e.to_string() })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config { path: shown, message: e.to_string() })
}

/// Reruns the constructor checks on a deserialized problem (its derive skips
/// them), so bad forcing or feedback parameters surface as config errors.
pub fn revalidate_problem(problem: &VolterraProblem) -> Result<VolterraProblem, CliError> {
    Ok(VolterraProblem::new(
        problem.kernel,
        problem.forcing.clone(),
        problem.nonlinearity.clone(),
        problem.cap_level,
    )?)
}

/// Applies a `--seed` override; any u64 is a valid master seed.
pub fn override_seed(mut mc: MCConfig, seed: Option<u64>) -> MCConfig {
    if let Some(s) = seed {
        mc.master_seed = s;
    }
    mc
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub problem: VolterraProblem,
    pub t_horizon: f64,
    /// Level ratios R for the geometric-ladder table.
    #[serde(default = "default_ratios")]
    pub ratios: Vec<f64>,
    /// Ladder starting level; defaults to the integral bound's minimizer.
    #[serde(default)]
    pub ladder_x: Option<f64>,
}

fn default_ratios() -> Vec<f64> {
    vec![1.5, 2.0, 4.0]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolterraConfig {
    pub problem: VolterraProblem,
    pub t_horizon: f64,
    /// One solve per entry; consecutive exact doublings feed the
    /// Richardson extrapolation.
    pub steps: Vec<usize>,
    #[serde(default = "default_explosion_cap")]
    pub explosion_cap: f64,
    /// Levels whose first passage times are tabulated.
    #[serde(default)]
    pub levels: Vec<f64>,
}

fn default_explosion_cap() -> f64 {
    1e12
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub model: ModelParams,
    pub mc: MCConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectConfig {
    pub model: ModelParams,
    pub mc: MCConfig,
    /// Strictly increasing hitting levels for the ladder.
    pub levels: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentConfig {
    pub model: ModelParams,
    pub mc: MCConfig,
    /// Moment order; must exceed 1 for the lower-bound ladder.
    pub m: f64,
    /// Control tilt; chosen automatically from (rho, m) when omitted.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Drift caps N for the lower-bound ladder.
    pub drift_caps: Vec<f64>,
    /// Barrier on the driftless path; defaults to corridor_lambda * T + 1.
    #[serde(default)]
    pub barrier_a: Option<f64>,
    #[serde(default = "default_corridor_lambda")]
    pub corridor_lambda: f64,
    /// Price caps c for the truncated-moment ladder E[(S_T ∧ c)^m].
    pub price_caps: Vec<f64>,
}

fn default_corridor_lambda() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovcheckConfig {
    /// Kernel for the continuity-modulus table and the sampling check.
    pub kernel: PowerKernel,
    pub rho: f64,
    /// Kernel exponents swept by the closed-form-vs-quadrature table.
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// Times (and time pairs) at which the moments are compared.
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
    #[serde(default)]
    pub sample: Option<SampleBlock>,
    #[serde(default)]
    pub modulus: Option<ModulusBlock>,
    /// Corridor-probability estimates (band-stay diagnostics for the
    /// barrier choice); one result row per entry.
    #[serde(default)]
    pub corridor: Vec<CorridorBlock>,
}

fn default_alphas() -> Vec<f64> {
    vec![0.6, 0.75, 0.9, 1.0, 1.25, 1.5]
}

fn default_t_values() -> Vec<f64> {
    vec![0.25, 1.0, 4.0]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBlock {
    pub grid: Grid,
    pub seed: u64,
    pub n_paths: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusBlock {
    pub t_horizon: f64,
    /// Strictly increasing lags in (0, t_horizon].
    pub lags: Vec<f64>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

fn default_grid_points() -> usize {
    512
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorridorBlock {
    pub kernel: PowerKernel,
    pub lambda: f64,
    pub grid: Grid,
    pub seed: u64,
    pub n_paths: u64,
}
