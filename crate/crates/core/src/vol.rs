//! Volatility specifications `sigma(t, y)` and their growth diagnostics.
//!
//! Three families are supported:
//!
//! ```text
//! Exponential:  sigma(t, y) = zeta(t) * exp(eta * y),   eta > 0, zeta >= 0 piecewise linear
//! Power:        sigma(t, y) = c * max(y, 0)^p,          c > 0, p >= 1
//! Constant:     sigma(t, y) = sbar,                     sbar >= 0
//! ```
//!
//! Evaluation saturates at `SIGMA_SAT` instead of overflowing: simulated
//! feedback loops push `y` far past any floating-point range and the
//! estimators downstream only need "astronomically large", not `inf`.
//!
//! The module also hosts the superlinearity test: whether
//! `int_A^inf (w / (scale * sigma_inf(w)))^(1/a) dw / w` is finite, where
//! `sigma_inf(w) = inf over t in [0, T0] of sigma(t, w)`. A finite value is
//! what licenses finite-time blow-up bounds for the associated Volterra
//! feedback equation.

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_non_negative, require_positive, CoreError, Result};
use crate::quad;

/// Saturation ceiling for `sigma` and `sigma^2` evaluations.
pub const SIGMA_SAT: f64 = 1e300;

/// Continuous piecewise-linear function with constant extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseLinearRepr", into = "PiecewiseLinearRepr")]
pub struct PiecewiseLinear {
    ts: Vec<f64>,
    vs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PiecewiseLinearRepr {
    ts: Vec<f64>,
    vs: Vec<f64>,
}

impl TryFrom<PiecewiseLinearRepr> for PiecewiseLinear {
    type Error = CoreError;
    fn try_from(r: PiecewiseLinearRepr) -> Result<Self> {
        PiecewiseLinear::new(r.ts, r.vs)
    }
}

impl From<PiecewiseLinear> for PiecewiseLinearRepr {
    fn from(p: PiecewiseLinear) -> Self {
        PiecewiseLinearRepr { ts: p.ts, vs: p.vs }
    }
}

impl PiecewiseLinear {
    pub fn new(ts: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if ts.is_empty() || ts.len() != vs.len() {
            return Err(CoreError::Data(format!(
                "piecewise-linear spec needs matching non-empty knot arrays, got {} times and {} values",
                ts.len(),
                vs.len()
            )));
        }
        for (i, &t) in ts.iter().enumerate() {
            require_finite("knot time", t)?;
            if i > 0 && t <= ts[i - 1] {
                return Err(CoreError::Data(format!(
                    "knot times must be strictly increasing, got {} after {}",
                    t,
                    ts[i - 1]
                )));
            }
        }
        for &v in &vs {
            require_non_negative("knot value", v)?;
        }
        Ok(Self { ts, vs })
    }

    pub fn constant(v: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![v])
    }

    pub fn eval(&self, t: f64) -> f64 {
        let ts = &self.ts;
        let vs = &self.vs;
        if t <= ts[0] {
            return vs[0];
        }
        if t >= ts[ts.len() - 1] {
            return vs[vs.len() - 1];
        }
        let hi = ts.partition_point(|&x| x <= t);
        let (t0, t1) = (ts[hi - 1], ts[hi]);
        let (v0, v1) = (vs[hi - 1], vs[hi]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Minimum over the closed interval `[a, b]`.
    ///
    /// Piecewise linearity means the minimum is attained at an interior knot
    /// or at one of the (interpolated) endpoints.
    pub fn min_on(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b);
        let mut m = self.eval(a).min(self.eval(b));
        for (&t, &v) in self.ts.iter().zip(&self.vs) {
            if t > a && t < b {
                m = m.min(v);
            }
        }
        m
    }
}

/// Volatility surface family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[serde(try_from = "VolSpecRepr")]
pub enum VolSpec {
    Exponential { eta: f64, zeta: PiecewiseLinear },
    Power { c: f64, p: f64 },
    Constant { sbar: f64 },
}

// Serde detour so deserialized values pass the same validation as the
// constructors.
#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum VolSpecRepr {
    Exponential { eta: f64, zeta: PiecewiseLinear },
    Power { c: f64, p: f64 },
    Constant { sbar: f64 },
}

impl TryFrom<VolSpecRepr> for VolSpec {
    type Error = CoreError;
    fn try_from(r: VolSpecRepr) -> Result<Self> {
        match r {
            VolSpecRepr::Exponential { eta, zeta } => VolSpec::exponential(eta, zeta),
            VolSpecRepr::Power { c, p } => VolSpec::power(c, p),
            VolSpecRepr::Constant { sbar } => VolSpec::constant(sbar),
        }
    }
}

impl VolSpec {
    /// Exponential family. `eta = 0` is accepted and collapses to the level
    /// curve `zeta(t)` (a time-dependent constant volatility).
    pub fn exponential(eta: f64, zeta: PiecewiseLinear) -> Result<Self> {
        require_non_negative("eta", eta)?;
        Ok(VolSpec::Exponential { eta, zeta })
    }

    /// Exponential family with a flat level curve `zeta(t) = zeta0`.
    pub fn exponential_flat(eta: f64, zeta0: f64) -> Result<Self> {
        require_non_negative("zeta0", zeta0)?;
        Self::exponential(eta, PiecewiseLinear::constant(zeta0)?)
    }

    /// Power family `c * max(y, 0)^p`. `p = 1` (linear growth) is accepted
    /// for use as a comparison case; the blow-up diagnostics report it as
    /// non-explosive.
    pub fn power(c: f64, p: f64) -> Result<Self> {
        require_positive("c", c)?;
        if !p.is_finite() || p < 1.0 {
            return Err(CoreError::Domain(format!(
                "power exponent must be finite and >= 1, got {p}"
            )));
        }
        Ok(VolSpec::Power { c, p })
    }

    pub fn constant(sbar: f64) -> Result<Self> {
        require_non_negative("sbar", sbar)?;
        Ok(VolSpec::Constant { sbar })
    }

    /// Evaluates `sigma(t, y) >= 0`, saturating at [`SIGMA_SAT`].
    pub fn eval_sigma(&self, t: f64, y: f64) -> f64 {
        match self {
            VolSpec::Exponential { eta, zeta } => {
                let level = zeta.eval(t);
                if level == 0.0 || eta * y == 0.0 {
                    // Exact at y = 0 and in the eta = 0 degeneration.
                    return level.min(SIGMA_SAT);
                }
                let log_sigma = level.ln() + eta * y;
                if log_sigma >= SIGMA_SAT.ln() {
                    SIGMA_SAT
                } else {
                    log_sigma.exp()
                }
            }
            VolSpec::Power { c, p } => {
                if y <= 0.0 {
                    0.0
                } else {
                    (c * y.powf(*p)).min(SIGMA_SAT)
                }
            }
            VolSpec::Constant { sbar } => *sbar,
        }
    }

    /// Evaluates `sigma(t, y)^2`, saturating the square at [`SIGMA_SAT`].
    pub fn eval_sigma_sq(&self, t: f64, y: f64) -> f64 {
        let s = self.eval_sigma(t, y);
        (s * s).min(SIGMA_SAT)
    }

    /// `inf over t in [0, t0]` of `sigma(t, w)` as a function of `w`.
    pub(crate) fn growth_profile(&self, t0: f64, scale: f64) -> GrowthProfile {
        match self {
            VolSpec::Exponential { eta: 0.0, zeta } => {
                GrowthProfile::Flat { level: scale * zeta.min_on(0.0, t0.max(0.0)) }
            }
            VolSpec::Exponential { eta, zeta } => GrowthProfile::Exp {
                coeff: scale * zeta.min_on(0.0, t0.max(0.0)),
                eta: *eta,
            },
            VolSpec::Power { c, p } => GrowthProfile::Power { coeff: scale * c, p: *p },
            VolSpec::Constant { sbar } => GrowthProfile::Flat { level: scale * sbar },
        }
    }
}

/// Lower envelope of a volatility family in the state variable, with the
/// time dependence already minimized out.
#[derive(Debug, Clone, Copy)]
pub(crate) enum GrowthProfile {
    Power { coeff: f64, p: f64 },
    Exp { coeff: f64, eta: f64 },
    Flat { level: f64 },
}

impl GrowthProfile {
    /// Envelope value at `w >= 0`, saturating like `eval_sigma`.
    pub fn eval(&self, w: f64) -> f64 {
        match *self {
            GrowthProfile::Power { coeff, p } => {
                if w <= 0.0 {
                    0.0
                } else {
                    (coeff * w.powf(p)).min(SIGMA_SAT)
                }
            }
            GrowthProfile::Exp { coeff, eta } => {
                if coeff == 0.0 {
                    0.0
                } else {
                    let lx = coeff.ln() + eta * w;
                    if lx >= SIGMA_SAT.ln() {
                        SIGMA_SAT
                    } else {
                        lx.exp()
                    }
                }
            }
            GrowthProfile::Flat { level } => level,
        }
    }

    /// The superlinearity integral `int_a^inf (w / env(w))^(1/alpha) dw / w`.
    ///
    /// Finite only when the envelope grows superlinearly. The quadrature runs
    /// to a family-specific cutoff; beyond it the remainder is added in closed
    /// form (power family) or bounded by an integrable exponential dominant
    /// (exponential family), so the returned value is always a valid upper
    /// estimate of the integral.
    pub fn osgood_integral(&self, alpha: f64, a_lower: f64) -> Result<OsgoodReport> {
        require_positive("alpha", alpha)?;
        require_positive("integration floor", a_lower)?;
        let divergent = Ok(OsgoodReport { finite: false, value: f64::INFINITY });
        match *self {
            GrowthProfile::Flat { .. } => divergent,
            GrowthProfile::Power { coeff, p } => {
                if coeff <= 0.0 || p <= 1.0 {
                    return divergent;
                }
                // Integrand coeff^(-1/a) * w^((1-p)/a - 1); exact tail.
                let pref = coeff.powf(-1.0 / alpha);
                let q = (1.0 - p) / alpha;
                let w_max = a_lower * 1e4;
                let body = quad::integrate(|w| w.powf(q - 1.0), a_lower, w_max, 1e-11)?;
                let tail = w_max.powf(q) / (-q);
                Ok(OsgoodReport { finite: true, value: pref * (body.value + tail) })
            }
            GrowthProfile::Exp { coeff, eta } => {
                if coeff <= 0.0 {
                    return divergent;
                }
                let pref = coeff.powf(-1.0 / alpha);
                let q = 1.0 / alpha - 1.0;
                let rate = eta / alpha;
                let w_max = a_lower.max(50.0 / eta);
                let body = quad::integrate(|w| w.powf(q) * (-rate * w).exp(), a_lower, w_max, 1e-11)?;
                // For w >= w_max the factor w^q * exp(-rate*w/2) is decreasing,
                // so the remainder is dominated by a pure exponential.
                let half = 0.5 * rate;
                let dominant = w_max.powf(q) * (-half * w_max).exp();
                let tail = dominant * (-half * w_max).exp() / half;
                Ok(OsgoodReport { finite: true, value: pref * (body.value + tail) })
            }
        }
    }
}

/// Result of the superlinearity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OsgoodReport {
    /// Whether the tail integral converges.
    pub finite: bool,
    /// Upper estimate of the integral; `inf` when divergent.
    pub value: f64,
}

/// Checks whether `scale * sigma` grows fast enough for finite-time blow-up:
/// computes `int_{a_lower}^inf (w / (scale * sigma_inf(w)))^(1/alpha) dw/w`
/// with `sigma_inf(w) = inf over t in [0, t0] of sigma(t, w)`.
pub fn osgood_check(
    vol: &VolSpec,
    alpha: f64,
    a_lower: f64,
    t0: f64,
    scale: f64,
) -> Result<OsgoodReport> {
    require_positive("scale", scale)?;
    require_non_negative("t0", t0)?;
    vol.growth_profile(t0, scale).osgood_integral(alpha, a_lower)
}
