//! Power-law convolution kernel and the Gaussian moments it induces.
//!
//! The kernel is `K_a(r) = a * r^(a-1)` for `r > 0`, normalized so that
//! `int_0^t K_a(r) dr = t^a`. The process of interest is the convolution
//! `Y_t = int_0^t K_a(t-s) dZ_s` of the kernel against a standard Brownian
//! motion, so second moments reduce to kernel-product integrals:
//!
//! ```text
//! Var Y_t        = a^2 t^(2a-1) / (2a-1)
//! Cov(Y_t, Y_u)  = int_0^(t^u) K_a(t-s) K_a(u-s) ds
//! Cov(Y_t, W_u)  = rho * (t^a - (t - t^u)^a)          (Z = rho W + rho_bar W_perp)
//! ```
//!
//! The variance requires `a > 1/2`; that floor is enforced at construction.
//! Off-diagonal covariances have an integrable endpoint singularity which is
//! removed exactly by the substitution `x = v^(1/a)` before quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::quad;

/// Relative tolerance used for the kernel-moment quadratures.
pub const MOMENT_QUAD_REL_TOL: f64 = 1e-10;

/// Power-law kernel `K_a(r) = a r^(a-1)` with `a > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PowerKernelRepr", into = "PowerKernelRepr")]
pub struct PowerKernel {
    alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct PowerKernelRepr {
    alpha: f64,
}

impl TryFrom<PowerKernelRepr> for PowerKernel {
    type Error = CoreError;
    fn try_from(repr: PowerKernelRepr) -> Result<Self> {
        PowerKernel::new(repr.alpha)
    }
}

impl From<PowerKernel> for PowerKernelRepr {
    fn from(k: PowerKernel) -> Self {
        PowerKernelRepr { alpha: k.alpha }
    }
}

impl PowerKernel {
    /// Creates a kernel with exponent `alpha`; `alpha <= 1/2` makes the
    /// convolved process infinite-variance and is rejected.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.5 {
            return Err(CoreError::Infeasible(format!(
                "kernel exponent must be finite and > 1/2, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    /// Kernel exponent corresponding to Hurst index `h` via `a = h + 1/2`.
    pub fn from_hurst(h: f64) -> Result<Self> {
        if !h.is_finite() || h <= 0.0 || h >= 1.0 {
            return Err(CoreError::Domain(format!(
                "Hurst index must lie in (0, 1), got {h}"
            )));
        }
        Self::new(h + 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Evaluates `K_a(r)`; the kernel is only defined for `r > 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !r.is_finite() || r <= 0.0 {
            return Err(CoreError::Domain(format!(
                "kernel argument must be finite and > 0, got {r}"
            )));
        }
        Ok(self.alpha * r.powf(self.alpha - 1.0))
    }

    /// Closed-form variance of `Y_t`.
    pub fn variance_y(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        if t == 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        a * a * t.powf(2.0 * a - 1.0) / (2.0 * a - 1.0)
    }

    /// Variance of `Y_t` by quadrature of the defining integral.
    ///
    /// The substitution `v = r^(2a-1)` removes the `r^(2a-2)` endpoint
    /// singularity exactly; kept as an independent route for cross-checks.
    pub fn variance_y_quadrature(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(CoreError::Domain(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.alpha;
        let b = 2.0 * a - 1.0;
        let q = quad::integrate(|_| 1.0, 0.0, t.powf(b), MOMENT_QUAD_REL_TOL)?;
        Ok(a * a / b * q.value)
    }

    /// Covariance of `(Y_t, Y_u)`: exact on the diagonal, quadrature with the
    /// flattening substitution off it.
    pub fn covariance_yy(&self, t: f64, u: f64) -> Result<f64> {
        if !t.is_finite() || !u.is_finite() || t < 0.0 || u < 0.0 {
            return Err(CoreError::Domain(format!(
                "times must be finite and >= 0, got ({t}, {u})"
            )));
        }
        let m = t.min(u);
        let delta = (t - u).abs();
        if m == 0.0 {
            return Ok(0.0);
        }
        if delta == 0.0 {
            return Ok(self.variance_y(m));
        }
        let a = self.alpha;
        // int_0^m x^(a-1) (x+delta)^(a-1) dx  with  x = v^(1/a):
        // the x^(a-1) dx factor becomes dv/a exactly.
        let inv_a = 1.0 / a;
        let q = quad::integrate(
            |v| (v.powf(inv_a) + delta).powf(a - 1.0),
            0.0,
            m.powf(a),
            MOMENT_QUAD_REL_TOL,
        )?;
        Ok(a * q.value)
    }

    /// Closed-form covariance of `(Y_t, W_u)` where the driver of `Y` has
    /// correlation `rho` with `W`.
    pub fn cross_cov_yw(&self, rho: f64, t: f64, u: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(CoreError::Domain(format!(
                "correlation must lie in [-1, 1], got {rho}"
            )));
        }
        if !t.is_finite() || !u.is_finite() || t < 0.0 || u < 0.0 {
            return Err(CoreError::Domain(format!(
                "times must be finite and >= 0, got ({t}, {u})"
            )));
        }
        let m = t.min(u);
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(rho * (t.powf(self.alpha) - (t - m).powf(self.alpha)))
    }

    /// `Cov(Y_t, W_u)` by quadrature of `rho * int_0^(t^u) K_a(t-s) ds` after
    /// the exact substitution `v = (t-s)^a`.
    pub fn cross_cov_yw_quadrature(&self, rho: f64, t: f64, u: f64) -> Result<f64> {
        let m = t.min(u);
        if t == 0.0 || m == 0.0 {
            return Ok(0.0);
        }
        let q = quad::integrate(|_| 1.0, (t - m).powf(self.alpha), t.powf(self.alpha), MOMENT_QUAD_REL_TOL)?;
        Ok(rho * q.value)
    }

    /// Product-integration weights for a uniform grid of spacing `dt`:
    /// `w[k-1] = int of K_a over [(k-1) dt, k dt] = (k dt)^a - ((k-1) dt)^a`.
    ///
    /// Row `i` of the discrete convolution uses `w[i-j-1]` against the sample
    /// at node `j`; the weights telescope so a unit integrand reproduces
    /// `t_i^a` exactly.
    pub fn grid_weights(&self, dt: f64, n: usize) -> Vec<f64> {
        let mut w = Vec::with_capacity(n);
        let mut prev = 0.0;
        for k in 1..=n {
            let cur = (k as f64 * dt).powf(self.alpha);
            w.push(cur - prev);
            prev = cur;
        }
        w
    }
}
