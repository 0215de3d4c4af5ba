//! Exact joint Gaussian simulation of (Y, W) on a uniform grid.
//!
//! The pair (Y_{t_1..t_n}, W_{t_1..t_n}) is a centered Gaussian vector whose
//! covariance is known in closed form, so paths are drawn exactly (up to
//! factorization) by multiplying a Cholesky factor into i.i.d. normals. No
//! time-stepping error enters anywhere in this module.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::kernel::PowerKernel;
use crate::linalg::{cholesky_with_jitter, packed_index, packed_len, CholeskyFactor};
use crate::rng::{path_rng, standard_normals};
use crate::stats::{wilson_interval, Z_95};

/// Fixed accumulation block: estimator reductions combine per-block partial
/// sums in block order, so results never depend on the worker count.
const ACCUM_BLOCK: u64 = 4096;

/// Uniform time grid t_i = i·T/n, i = 0..n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct Grid {
    t_horizon: f64,
    n: usize,
}

#[derive(serde::Deserialize)]
struct GridRepr {
    t_horizon: f64,
    n: usize,
}

impl TryFrom<GridRepr> for Grid {
    type Error = CoreError;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.t_horizon, r.n)
    }
}

impl Grid {
    pub fn new(t_horizon: f64, n: usize) -> Result<Self> {
        if !t_horizon.is_finite() || t_horizon <= 0.0 {
            return Err(CoreError::Domain(format!(
                "grid horizon must be positive and finite, got {t_horizon}"
            )));
        }
        if n < 2 {
            return Err(CoreError::Domain(format!("grid needs at least 2 steps, got {n}")));
        }
        Ok(Grid { t_horizon, n })
    }

    pub fn t_horizon(&self) -> f64 {
        self.t_horizon
    }

    /// Number of steps (the grid has n + 1 nodes).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.t_horizon / self.n as f64
    }

    /// Node time t_i = i·dt. Matches the telescoped convolution weights
    /// bit-for-bit, which keeps the drift-of-one identity exact.
    pub fn node(&self, i: usize) -> f64 {
        self.dt() * i as f64
    }

    /// Doubles the resolution, keeping the horizon.
    pub fn refined(&self) -> Grid {
        Grid { t_horizon: self.t_horizon, n: self.n * 2 }
    }
}

/// One exactly-sampled path of the pair (Y, W) plus synthesized Z increments.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    pub grid: Grid,
    /// Y at nodes t_0..t_n; y[0] = 0.
    pub y: Vec<f64>,
    /// W increments per step.
    pub dw: Vec<f64>,
    /// Z increments per step: dz = ρ·dw + ρ̄·dw̄ with fresh independent dw̄.
    pub dz: Vec<f64>,
    pub master_seed: u64,
    pub path_index: u64,
}

/// Cholesky factor of the stacked covariance of (Y_{t_1..t_n}, W_{t_1..t_n}).
#[derive(Debug, Clone)]
pub struct JointFactor {
    pub kernel: PowerKernel,
    pub rho: f64,
    pub grid: Grid,
    /// Packed analytic covariance (pre-jitter), kept for verification.
    pub covariance: Vec<f64>,
    pub factor: CholeskyFactor,
}

/// Builds the exact 2n×2n covariance of (Y, W) and factorizes it.
///
/// Blocks: Cov(Y,Y) from the kernel's quadrature/closed forms, Cov(Y,W) from
/// the cross-covariance, Cov(W,W) = min(t, u). Jitter regularization applied
/// by the factorization is recorded in the returned factor.
pub fn build_joint_factor(kernel: PowerKernel, rho: f64, grid: Grid) -> Result<JointFactor> {
    if !(-1.0..=1.0).contains(&rho) || rho.is_nan() {
        return Err(CoreError::Domain(format!("correlation must lie in [-1, 1], got {rho}")));
    }
    let n = grid.n();
    let m = 2 * n;
    let mut cov = vec![0.0; packed_len(m)];
    for i in 0..m {
        for j in 0..=i {
            let v = match (i < n, j < n) {
                (true, true) => kernel.covariance_yy(grid.node(i + 1), grid.node(j + 1))?,
                (false, true) => kernel.cross_cov_yw(rho, grid.node(j + 1), grid.node(i - n + 1))?,
                (false, false) => grid.node(j - n + 1), // min(t_i, t_j), j <= i
                (true, false) => unreachable!("packed storage visits i >= j only"),
            };
            cov[packed_index(i, j)] = v;
        }
    }
    let factor = cholesky_with_jitter(&cov, m)?;
    Ok(JointFactor { kernel, rho, grid, covariance: cov, factor })
}

impl JointFactor {
    /// Analytic covariance entry (i, j) of the stacked vector, pre-jitter.
    pub fn covariance_entry(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i >= j { (i, j) } else { (j, i) };
        self.covariance[packed_index(a, b)]
    }

    fn rho_bar(&self) -> f64 {
        (1.0 - self.rho * self.rho).max(0.0).sqrt()
    }

    /// Stacked Gaussian vector (Y_{t_1..t_n}, W_{t_1..t_n}) for one path,
    /// without the bundle wrapping. Consumes 2n draws of the path stream.
    fn sample_vector(&self, master_seed: u64, path_index: u64, negate: bool) -> Vec<f64> {
        let m = 2 * self.grid.n();
        let mut rng = path_rng(master_seed, path_index);
        let mut xi = standard_normals(&mut rng, m);
        if negate {
            for x in xi.iter_mut() {
                *x = -*x;
            }
        }
        self.factor.mul_vec(&xi)
    }
}

/// Draws one exact path. Bit-identical for a given (master seed, path index)
/// no matter how paths are batched; `negate` flips every underlying normal
/// (the antithetic mirror).
pub fn sample_joint_path_signed(
    factor: &JointFactor,
    master_seed: u64,
    path_index: u64,
    negate: bool,
) -> PathBundle {
    let n = factor.grid.n();
    let dt = factor.grid.dt();
    let mut rng = path_rng(master_seed, path_index);
    let mut draws = standard_normals(&mut rng, 3 * n); // 2n joint + n for dw̄
    if negate {
        for x in draws.iter_mut() {
            *x = -*x;
        }
    }
    let v = factor.factor.mul_vec(&draws[..2 * n]);

    let mut y = Vec::with_capacity(n + 1);
    y.push(0.0);
    y.extend_from_slice(&v[..n]);

    let mut dw = Vec::with_capacity(n);
    let mut prev = 0.0;
    for &w in &v[n..2 * n] {
        dw.push(w - prev);
        prev = w;
    }

    let rho = factor.rho;
    let rho_bar = factor.rho_bar();
    let sqrt_dt = dt.sqrt();
    let dz: Vec<f64> = dw
        .iter()
        .zip(&draws[2 * n..])
        .map(|(&dwi, &fresh)| rho * dwi + rho_bar * sqrt_dt * fresh)
        .collect();

    PathBundle { grid: factor.grid, y, dw, dz, master_seed, path_index }
}

pub fn sample_joint_path(factor: &JointFactor, master_seed: u64, path_index: u64) -> PathBundle {
    sample_joint_path_signed(factor, master_seed, path_index, false)
}

/// Samples paths for a contiguous index range in parallel. Output order is
/// by path index, so any partition into ranges concatenates identically.
pub fn sample_joint_paths_range(
    factor: &JointFactor,
    master_seed: u64,
    first_index: u64,
    count: usize,
) -> Vec<PathBundle> {
    (0..count as u64)
        .into_par_iter()
        .map(|k| sample_joint_path(factor, master_seed, first_index + k))
        .collect()
}

pub fn sample_joint_paths(factor: &JointFactor, master_seed: u64, count: usize) -> Vec<PathBundle> {
    sample_joint_paths_range(factor, master_seed, 0, count)
}

/// Cholesky factor for Y alone (n×n), for schemes that never look at W.
#[derive(Debug, Clone)]
pub struct YFactor {
    pub kernel: PowerKernel,
    pub grid: Grid,
    pub factor: CholeskyFactor,
}

pub fn build_y_factor(kernel: PowerKernel, grid: Grid) -> Result<YFactor> {
    let n = grid.n();
    let mut cov = vec![0.0; packed_len(n)];
    for i in 0..n {
        for j in 0..=i {
            cov[packed_index(i, j)] = kernel.covariance_yy(grid.node(i + 1), grid.node(j + 1))?;
        }
    }
    let factor = cholesky_with_jitter(&cov, n)?;
    Ok(YFactor { kernel, grid, factor })
}

/// One exact Y path at nodes t_0..t_n (leading zero included).
pub fn sample_y_path_signed(
    factor: &YFactor,
    master_seed: u64,
    path_index: u64,
    negate: bool,
) -> Vec<f64> {
    let n = factor.grid.n();
    let mut rng = path_rng(master_seed, path_index);
    let mut xi = standard_normals(&mut rng, n);
    if negate {
        for x in xi.iter_mut() {
            *x = -*x;
        }
    }
    let v = factor.factor.mul_vec(&xi);
    let mut y = Vec::with_capacity(n + 1);
    y.push(0.0);
    y.extend(v);
    y
}

pub fn sample_y_path(factor: &YFactor, master_seed: u64, path_index: u64) -> Vec<f64> {
    sample_y_path_signed(factor, master_seed, path_index, false)
}

/// Discrete convolution of per-step drift samples against the kernel's exact
/// product weights: out[i] = Σ_{j<i} w_{i-j}·drift[j], out[0] = 0.
///
/// This is the deterministic shift added to Y when the driving noise picks up
/// a drift, and equally the image of a square-summable control under the
/// kernel's reproducing map; both uses share this implementation.
pub fn convolve_drift(kernel: PowerKernel, drift_samples: &[f64], grid: Grid) -> Result<Vec<f64>> {
    let n = grid.n();
    if drift_samples.len() != n {
        return Err(CoreError::Data(format!(
            "need one drift sample per step: got {}, grid has {n} steps",
            drift_samples.len()
        )));
    }
    let w = kernel.grid_weights(grid.dt(), n);
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        let mut acc = 0.0;
        for j in 0..i {
            acc += w[i - j - 1] * drift_samples[j];
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Kernel image of a sampled function; same numerics as [`convolve_drift`].
pub fn cameron_martin_map(kernel: PowerKernel, f: &[f64], grid: Grid) -> Result<Vec<f64>> {
    convolve_drift(kernel, f, grid)
}

/// Monte Carlo estimate of a probability, with a Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorridorEstimate {
    pub probability: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub wilson95: (f64, f64),
    pub hits: u64,
    pub n_paths: u64,
}

/// Estimates P(λt_i − 1 ≤ Y_{t_i} ≤ λt_i at every node).
///
/// The band has unit width and tilts with slope λ. Bounds are non-strict and
/// checked node-wise; at t = 0 the upper boundary touches Y_0 = 0, which is
/// why closed bounds are used.
pub fn corridor_probability(
    kernel: PowerKernel,
    lambda: f64,
    grid: Grid,
    master_seed: u64,
    count: u64,
) -> Result<CorridorEstimate> {
    if !lambda.is_finite() {
        return Err(CoreError::Domain(format!("corridor slope must be finite, got {lambda}")));
    }
    if count < 100 {
        return Err(CoreError::Domain(format!(
            "corridor estimation needs at least 100 paths, got {count}"
        )));
    }
    let factor = build_y_factor(kernel, grid)?;
    let n = grid.n();
    let block_hits: Vec<u64> = (0..count.div_ceil(ACCUM_BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * ACCUM_BLOCK;
            let hi = ((b + 1) * ACCUM_BLOCK).min(count);
            let mut hits = 0u64;
            for p in lo..hi {
                let y = sample_y_path(&factor, master_seed, p);
                let inside = (1..=n).all(|i| {
                    let line = lambda * grid.node(i);
                    line - 1.0 <= y[i] && y[i] <= line
                });
                if inside {
                    hits += 1;
                }
            }
            hits
        })
        .collect();
    let hits: u64 = block_hits.iter().sum();
    let p = hits as f64 / count as f64;
    let se = (p * (1.0 - p) / count as f64).sqrt();
    Ok(CorridorEstimate {
        probability: p,
        std_error: se,
        ci95: (p - Z_95 * se, p + Z_95 * se),
        wilson95: wilson_interval(hits, count)?,
        hits,
        n_paths: count,
    })
}

/// Comparison of empirical moments of the stacked (Y, W) vector against the
/// analytic covariance, in units of the estimator's own standard error.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceCheck {
    pub entries: usize,
    pub n_paths: u64,
    /// max over entries of |empirical − analytic| / SE.
    pub max_abs_z: f64,
    /// Stacked indices of the worst entry.
    pub worst_entry: (usize, usize),
    pub worst_empirical: f64,
    pub worst_analytic: f64,
}

/// Draws `count` stacked vectors and scores every covariance entry.
///
/// The estimator is the mean-zero second moment (1/N)Σ v_i·v_j, whose exact
/// standard error √((C_ii·C_jj + C_ij²)/N) follows from the Gaussian
/// fourth-moment identity — no plug-in variance needed.
pub fn covariance_check(factor: &JointFactor, master_seed: u64, count: u64) -> Result<CovarianceCheck> {
    if count == 0 {
        return Err(CoreError::Data("covariance check needs at least one draw".into()));
    }
    let m = 2 * factor.grid.n();
    let plen = packed_len(m);
    let block_sums: Vec<Vec<f64>> = (0..count.div_ceil(ACCUM_BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * ACCUM_BLOCK;
            let hi = ((b + 1) * ACCUM_BLOCK).min(count);
            let mut sums = vec![0.0; plen];
            for p in lo..hi {
                let v = factor.sample_vector(master_seed, p, false);
                for i in 0..m {
                    let vi = v[i];
                    let row = &mut sums[packed_index(i, 0)..=packed_index(i, i)];
                    for (j, s) in row.iter_mut().enumerate() {
                        *s += vi * v[j];
                    }
                }
            }
            sums
        })
        .collect();
    let mut sums = vec![0.0; plen];
    for block in &block_sums {
        for (s, b) in sums.iter_mut().zip(block) {
            *s += b;
        }
    }

    let nf = count as f64;
    let mut worst = CovarianceCheck {
        entries: plen,
        n_paths: count,
        max_abs_z: 0.0,
        worst_entry: (0, 0),
        worst_empirical: 0.0,
        worst_analytic: 0.0,
    };
    for i in 0..m {
        for j in 0..=i {
            let analytic = factor.covariance[packed_index(i, j)];
            let c_ii = factor.covariance[packed_index(i, i)];
            let c_jj = factor.covariance[packed_index(j, j)];
            let se = ((c_ii * c_jj + analytic * analytic) / nf).sqrt();
            let empirical = sums[packed_index(i, j)] / nf;
            let z = (empirical - analytic).abs() / se;
            if z > worst.max_abs_z {
                worst.max_abs_z = z;
                worst.worst_entry = (i, j);
                worst.worst_empirical = empirical;
                worst.worst_analytic = analytic;
            }
        }
    }
    Ok(worst)
}
