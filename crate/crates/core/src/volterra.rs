//! Deterministic Volterra feedback equations and blow-up analysis.
//!
//! The equation of interest is
//!
//! ```text
//! y(t) = z(t) + int_0^t K_a(t - s) b(s, y(s)) ds,
//! ```
//!
//! solved by left-point product integration on a uniform grid: the kernel is
//! integrated exactly over each step, so node `i` reads
//! `y_i = z(t_i) + sum_{j<i} w_{i-j} b(t_j, y_j)` with
//! `w_k = (k dt)^a - ((k-1) dt)^a`. Superlinear feedback makes solutions
//! explode in finite time; the solver tracks level crossings and stops once a
//! configurable cap is exceeded.
//!
//! Two a-priori bounds on the passage time to high levels are provided: an
//! integral bound `inf_x { h(x) + (1/a) int_x^inf (w / b0(w))^(1/a) dw/w }`
//! with `h(x) = sup{ t : z(t) <= x }` and `b0` the time-infimum of the
//! feedback, and a geometric-levels variant that sums per-level passage
//! estimates along `x R^n`. Both are upper bounds for the time the solution
//! needs to clear every level, hence comparable against observed explosion
//! times.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, CoreError, Result};
use crate::kernel::PowerKernel;
use crate::vol::{GrowthProfile, VolSpec, SIGMA_SAT};

/// Forcing term `z` of the Volterra equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Forcing {
    /// `z(t) = slope * t - offset`.
    Affine { slope: f64, offset: f64 },
    /// Node values on the solve grid (length `steps + 1`).
    Samples { values: Vec<f64> },
}

impl Forcing {
    fn affine(slope: f64, offset: f64) -> Result<Self> {
        if !slope.is_finite() || !offset.is_finite() {
            return Err(CoreError::Data(format!(
                "affine forcing coefficients must be finite, got slope {slope}, offset {offset}"
            )));
        }
        Ok(Forcing::Affine { slope, offset })
    }
}

/// Feedback nonlinearity `b(t, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `b(t, y) = scale * sigma(t, y)` through the saturating volatility
    /// evaluator (negative states are floored by the Power family).
    Sigma { vol: VolSpec, scale: f64 },
    /// `b(t, y) = c * y^p` as a signed integer power. This is the analytic
    /// benchmark form: unlike the floored `Sigma` variant it keeps the
    /// feedback active for negative states.
    AnalyticPower { c: f64, p: i32 },
}

impl Nonlinearity {
    pub fn eval(&self, t: f64, y: f64) -> f64 {
        match self {
            Nonlinearity::Sigma { vol, scale } => scale * vol.eval_sigma(t, y),
            Nonlinearity::AnalyticPower { c, p } => {
                let raw = c * y.powi(*p);
                if raw.is_nan() {
                    0.0
                } else {
                    raw.clamp(-SIGMA_SAT, SIGMA_SAT)
                }
            }
        }
    }

    /// Lower envelope on `[0, t0] x [0, inf)` for the bound machinery.
    fn growth_profile(&self, t0: f64) -> Result<GrowthProfile> {
        match self {
            Nonlinearity::Sigma { vol, scale } => {
                require_positive("feedback scale", *scale)?;
                Ok(vol.growth_profile(t0, *scale))
            }
            Nonlinearity::AnalyticPower { c, p } => {
                require_positive("feedback coefficient", *c)?;
                if *p < 1 {
                    return Err(CoreError::Domain(format!(
                        "feedback power must be >= 1, got {p}"
                    )));
                }
                Ok(GrowthProfile::Power { coeff: *c, p: *p as f64 })
            }
        }
    }
}

/// A Volterra feedback problem: kernel, forcing, nonlinearity, and an
/// optional cap `b ∧ cap_level` that truncates the feedback (capped problems
/// are Lipschitz and never explode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolterraProblem {
    pub kernel: PowerKernel,
    pub forcing: Forcing,
    pub nonlinearity: Nonlinearity,
    #[serde(default)]
    pub cap_level: Option<f64>,
}

impl VolterraProblem {
    pub fn new(
        kernel: PowerKernel,
        forcing: Forcing,
        nonlinearity: Nonlinearity,
        cap_level: Option<f64>,
    ) -> Result<Self> {
        if let Forcing::Affine { slope, offset } = forcing {
            Forcing::affine(slope, offset)?;
        }
        if let Nonlinearity::AnalyticPower { c, p } = nonlinearity {
            crate::error::require_finite("feedback coefficient", c)?;
            if p < 1 {
                return Err(CoreError::Domain(format!("feedback power must be >= 1, got {p}")));
            }
        }
        if let Some(cap) = cap_level {
            require_positive("cap_level", cap)?;
        }
        Ok(Self { kernel, forcing, nonlinearity, cap_level })
    }

    fn feedback(&self, t: f64, y: f64) -> f64 {
        let b = self.nonlinearity.eval(t, y);
        match self.cap_level {
            Some(cap) => b.min(cap),
            None => b,
        }
    }

    fn forcing_at(&self, times: &[f64]) -> Result<Vec<f64>> {
        match &self.forcing {
            Forcing::Affine { slope, offset } => {
                Ok(times.iter().map(|&t| slope * t - offset).collect())
            }
            Forcing::Samples { values } => {
                if values.len() != times.len() {
                    return Err(CoreError::Data(format!(
                        "sampled forcing has {} nodes but the grid has {}",
                        values.len(),
                        times.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(CoreError::Data("sampled forcing contains non-finite values".into()));
                }
                Ok(values.clone())
            }
        }
    }
}

/// Outcome of a product-integration solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpReport {
    pub exploded: bool,
    /// First grid time with `y > explosion_cap`; equals the horizon when the
    /// solve covered it without exploding.
    pub t_cap: f64,
    /// `(level, first grid time with y >= level)` for each tracked level.
    pub level_crossings: Vec<(f64, Option<f64>)>,
    pub grid_steps: usize,
    /// Node values, truncated just after the explosion node.
    pub solution: Vec<f64>,
}

fn validate_levels(levels: &[f64]) -> Result<()> {
    for (k, &l) in levels.iter().enumerate() {
        if !l.is_finite() {
            return Err(CoreError::Data(format!("levels must be finite, got {l}")));
        }
        if k > 0 && l <= levels[k - 1] {
            return Err(CoreError::Data("levels must be strictly increasing".into()));
        }
    }
    Ok(())
}

/// Solves the problem on `steps` uniform intervals over `[0, horizon]`.
///
/// The solve stops at the first node exceeding `explosion_cap`; the cap must
/// dominate the forcing so that a crossing is unambiguously driven by
/// feedback.
pub fn solve_volterra(
    problem: &VolterraProblem,
    horizon: f64,
    steps: usize,
    explosion_cap: f64,
    levels: &[f64],
) -> Result<BlowUpReport> {
    require_positive("horizon", horizon)?;
    require_positive("explosion_cap", explosion_cap)?;
    if steps < 2 {
        return Err(CoreError::Data(format!("need at least 2 steps, got {steps}")));
    }
    validate_levels(levels)?;

    let dt = horizon / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let z = problem.forcing_at(&times)?;
    let z_sup = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if z_sup >= explosion_cap {
        return Err(CoreError::Data(format!(
            "explosion cap {explosion_cap} must exceed the forcing magnitude {z_sup}"
        )));
    }
    let w = problem.kernel.grid_weights(dt, steps);

    let mut y = Vec::with_capacity(steps + 1);
    let mut b_vals = Vec::with_capacity(steps + 1);
    let mut crossings: Vec<(f64, Option<f64>)> = levels.iter().map(|&l| (l, None)).collect();
    let mut cursor = 0usize;
    let mut exploded = false;
    let mut t_cap = horizon;

    y.push(z[0]);
    let record = |cursor: &mut usize, value: f64, t: f64, crossings: &mut Vec<(f64, Option<f64>)>| {
        while *cursor < levels.len() && value >= levels[*cursor] {
            crossings[*cursor].1 = Some(t);
            *cursor += 1;
        }
    };
    record(&mut cursor, z[0], 0.0, &mut crossings);
    b_vals.push(problem.feedback(0.0, z[0]));

    for i in 1..=steps {
        let mut acc = 0.0;
        for (j, bj) in b_vals.iter().enumerate() {
            acc += w[i - j - 1] * bj;
        }
        let yi = z[i] + acc;
        y.push(yi);
        record(&mut cursor, yi, times[i], &mut crossings);
        if yi > explosion_cap {
            exploded = true;
            t_cap = times[i];
            break;
        }
        b_vals.push(problem.feedback(times[i], yi));
    }

    Ok(BlowUpReport {
        exploded,
        t_cap,
        level_crossings: crossings,
        grid_steps: steps,
        solution: y,
    })
}

/// First-order Richardson extrapolation from solves at `h` and `h/2`.
pub fn richardson_first_order(coarse: f64, fine: f64) -> f64 {
    2.0 * fine - coarse
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonDirection {
    /// Candidate claims `u <= z + K * b(u)` at every node.
    Sub,
    /// Candidate claims `u >= z + K * b(u)` at every node.
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub holds: bool,
    /// Worst signed violation: positive means the claimed inequality fails
    /// by that much somewhere on the grid.
    pub max_violation: f64,
}

/// Verifies the discrete sub/supersolution inequality for a candidate path
/// given on the same grid the solver would use.
pub fn check_comparison(
    candidate: &[f64],
    problem: &VolterraProblem,
    horizon: f64,
    steps: usize,
    direction: ComparisonDirection,
) -> Result<ComparisonReport> {
    require_positive("horizon", horizon)?;
    if steps < 2 {
        return Err(CoreError::Data(format!("need at least 2 steps, got {steps}")));
    }
    if candidate.len() != steps + 1 {
        return Err(CoreError::Data(format!(
            "candidate has {} nodes but the grid has {}",
            candidate.len(),
            steps + 1
        )));
    }
    if candidate.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Data("candidate contains non-finite values".into()));
    }
    let dt = horizon / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let z = problem.forcing_at(&times)?;
    let w = problem.kernel.grid_weights(dt, steps);
    let b_vals: Vec<f64> = candidate
        .iter()
        .zip(&times)
        .map(|(&u, &t)| problem.feedback(t, u))
        .collect();

    let mut worst = f64::NEG_INFINITY;
    for i in 0..=steps {
        let mut acc = 0.0;
        for j in 0..i {
            acc += w[i - j - 1] * b_vals[j];
        }
        let rhs = z[i] + acc;
        let violation = match direction {
            ComparisonDirection::Sub => candidate[i] - rhs,
            ComparisonDirection::Super => rhs - candidate[i],
        };
        worst = worst.max(violation);
    }
    Ok(ComparisonReport { holds: worst <= 0.0, max_violation: worst })
}

/// Upper bound on the time the solution needs to pass every level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplosionBound {
    /// `h(x*) + integral(x*)`; `+inf` when the feedback tail integral
    /// diverges (no finite-time blow-up certificate).
    pub bound: f64,
    pub minimizer_x: f64,
    pub h_value: f64,
    pub integral_value: f64,
    pub osgood_finite: bool,
}

/// Components of the level-passage objective at a fixed starting level.
struct Objective<'a> {
    slope: f64,
    offset: f64,
    alpha: f64,
    profile: &'a GrowthProfile,
}

impl Objective<'_> {
    /// `h(x) = sup { t >= 0 : slope * t - offset <= x }` for nondecreasing z.
    fn h(&self, x: f64) -> f64 {
        if self.slope > 0.0 {
            ((x + self.offset) / self.slope).max(0.0)
        } else if -self.offset <= x {
            f64::INFINITY
        } else {
            0.0
        }
    }

    fn integral(&self, x: f64) -> Result<f64> {
        Ok(self.profile.osgood_integral(self.alpha, x)?.value / self.alpha)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let h = self.h(x);
        if h.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok(h + self.integral(x)?)
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_min(f: &mut dyn FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if b - a <= 1e-10 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Integral blow-up bound for an affine-forced problem.
///
/// Minimizes `h(x) + (1/a) int_x^inf (w / b0(w))^(1/a) dw / w` over starting
/// levels `x > 0`, where `b0(w) = inf over [0, t_horizon] of the feedback`.
/// The objective need not be unimodal, so a geometric scan brackets every
/// local minimum and each is polished by golden-section search.
///
/// Requires nondecreasing forcing (`slope >= 0`) and a positive nondecreasing
/// feedback envelope; a capped feedback is bounded, hence never certifiably
/// explosive, and reports an infinite bound.
pub fn explosion_bound(problem: &VolterraProblem, t_horizon: f64) -> Result<ExplosionBound> {
    require_positive("t_horizon", t_horizon)?;
    let (slope, offset) = match problem.forcing {
        Forcing::Affine { slope, offset } => (slope, offset),
        Forcing::Samples { .. } => {
            return Err(CoreError::Domain(
                "the integral bound requires affine forcing".into(),
            ))
        }
    };
    if slope < 0.0 {
        return Err(CoreError::Domain(format!(
            "the bound requires nondecreasing forcing, got slope {slope}"
        )));
    }
    let divergent = ExplosionBound {
        bound: f64::INFINITY,
        minimizer_x: f64::NAN,
        h_value: f64::NAN,
        integral_value: f64::INFINITY,
        osgood_finite: false,
    };
    if problem.cap_level.is_some() {
        return Ok(divergent);
    }
    let profile = problem.nonlinearity.growth_profile(t_horizon)?;
    let alpha = problem.kernel.alpha();
    if !profile.osgood_integral(alpha, 1.0)?.finite {
        return Ok(divergent);
    }
    let obj = Objective { slope, offset, alpha, profile: &profile };

    // Geometric scan over candidate starting levels; extend the window while
    // the best value sits on its edge.
    let mut lo = 1e-6f64;
    let mut hi = 1e6f64;
    let per_decade = 8usize;
    let (mut xs, mut fs) = scan(&obj, lo, hi, per_decade)?;
    for _ in 0..3 {
        let best = argmin(&fs);
        if best == 0 && lo > 1e-12 {
            lo *= 1e-6;
        } else if best + 1 == fs.len() && hi < 1e12 {
            hi *= 1e6;
        } else {
            break;
        }
        let rescan = scan(&obj, lo, hi, per_decade)?;
        xs = rescan.0;
        fs = rescan.1;
    }

    // Polish every interior local minimum; keep the best.
    let mut best_x = f64::NAN;
    let mut best_f = f64::INFINITY;
    for i in 1..xs.len() - 1 {
        if fs[i].is_finite() && fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1] {
            let mut f = |x: f64| obj.eval(x);
            let x = golden_min(&mut f, xs[i - 1], xs[i + 1])?;
            let v = obj.eval(x)?;
            let (x, v) = if v <= fs[i] { (x, v) } else { (xs[i], fs[i]) };
            if v < best_f {
                best_f = v;
                best_x = x;
            }
        }
    }
    if !best_f.is_finite() {
        // No finite objective value anywhere: degenerate forcing that never
        // pushes the state up to the feedback region.
        return Ok(ExplosionBound { osgood_finite: true, ..divergent });
    }
    let h_value = obj.h(best_x);
    let integral_value = obj.integral(best_x)?;
    Ok(ExplosionBound {
        bound: h_value + integral_value,
        minimizer_x: best_x,
        h_value,
        integral_value,
        osgood_finite: true,
    })
}

fn scan(obj: &Objective<'_>, lo: f64, hi: f64, per_decade: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).ceil() as usize + 1;
    let mut xs = Vec::with_capacity(count);
    let mut fs = Vec::with_capacity(count);
    for k in 0..count {
        let x = lo * 10f64.powf(decades * k as f64 / (count - 1) as f64);
        xs.push(x);
        fs.push(obj.eval(x)?);
    }
    Ok((xs, fs))
}

fn argmin(fs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in fs.iter().enumerate() {
        if v < fs[best] {
            best = i;
        }
    }
    best
}

/// Geometric-levels bound evaluated at a fixed starting level and ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricBound {
    /// `h(x) + series`; `+inf` when the per-level series diverges.
    pub bound: f64,
    pub h_value: f64,
    pub series_value: f64,
    pub terms_used: usize,
}

/// Sums the per-level passage estimates along the ladder `x R^n`:
/// `sum_n ( x (R^n - R^(n-1)) / b0(x R^(n-1)) )^(1/a)`.
///
/// The series is truncated once its geometric tail is resolvable; the tail
/// estimate uses the worst recent term ratio, so the truncation never
/// undershoots a convergent series. A non-decaying series yields `+inf`.
pub fn explosion_bound_geometric(
    problem: &VolterraProblem,
    t_horizon: f64,
    x: f64,
    ratio: f64,
) -> Result<GeometricBound> {
    require_positive("t_horizon", t_horizon)?;
    require_positive("starting level x", x)?;
    if !ratio.is_finite() || ratio <= 1.0 {
        return Err(CoreError::Domain(format!(
            "level ratio must be > 1, got {ratio}"
        )));
    }
    let (slope, offset) = match problem.forcing {
        Forcing::Affine { slope, offset } => (slope, offset),
        Forcing::Samples { .. } => {
            return Err(CoreError::Domain(
                "the geometric bound requires affine forcing".into(),
            ))
        }
    };
    if slope < 0.0 {
        return Err(CoreError::Domain(format!(
            "the bound requires nondecreasing forcing, got slope {slope}"
        )));
    }
    let h_value = if slope > 0.0 {
        ((x + offset) / slope).max(0.0)
    } else if -offset <= x {
        f64::INFINITY
    } else {
        0.0
    };

    let infinite = |terms| GeometricBound {
        bound: f64::INFINITY,
        h_value,
        series_value: f64::INFINITY,
        terms_used: terms,
    };
    if problem.cap_level.is_some() {
        return Ok(infinite(0));
    }
    let profile = problem.nonlinearity.growth_profile(t_horizon)?;
    let inv_a = 1.0 / problem.kernel.alpha();

    let max_terms = 100_000usize;
    let mut sum = 0.0f64;
    let mut prev_term = f64::NAN;
    let mut recent_ratios: Vec<f64> = Vec::new();
    let mut level = x;
    for n in 1..=max_terms {
        let b0 = profile.eval(level);
        if b0 <= 0.0 {
            return Ok(infinite(n));
        }
        let term = (level * (ratio - 1.0) / b0).powf(inv_a);
        sum += term;
        if !sum.is_finite() {
            return Ok(infinite(n));
        }
        if n > 1 {
            let q = term / prev_term;
            recent_ratios.push(q);
            if recent_ratios.len() > 8 {
                recent_ratios.remove(0);
            }
            let q_max = recent_ratios.iter().cloned().fold(0.0f64, f64::max);
            let stable = recent_ratios.len() == 8
                && recent_ratios.iter().all(|&r| (r - q_max).abs() <= 1e-10 * q_max);
            if term <= 1e-16 * sum || (stable && q_max < 1.0) {
                let tail = if q_max < 1.0 { term * q_max / (1.0 - q_max) } else { 0.0 };
                let series = sum + tail;
                return Ok(GeometricBound {
                    bound: h_value + series,
                    h_value,
                    series_value: series,
                    terms_used: n,
                });
            }
        }
        prev_term = term;
        level *= ratio;
    }
    // Budget exhausted: decaying terms still earn a conservative tail,
    // anything else is reported as divergent.
    let q_max = recent_ratios.iter().cloned().fold(0.0f64, f64::max);
    if q_max < 1.0 {
        let tail = prev_term * q_max / (1.0 - q_max);
        let series = sum + tail;
        Ok(GeometricBound {
            bound: h_value + series,
            h_value,
            series_value: series,
            terms_used: max_terms,
        })
    } else {
        Ok(infinite(max_terms))
    }
}
