//! Price-model parameter set.
//!
//! The asset follows `dS_t / S_t = sigma(t, Y_t) dW_t` with
//! `Y_t = int_0^t K_a(t-s) dZ_s` and `Z = rho W + rho_bar W_perp`.
//! `rho_bar = sqrt(1 - rho^2)` is always derived, never stored.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, CoreError, Result};
use crate::kernel::PowerKernel;
use crate::vol::VolSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParamsRepr")]
pub struct ModelParams {
    /// Correlation between the price driver `W` and the volatility driver `Z`.
    pub rho: f64,
    /// Initial asset level.
    pub s0: f64,
    /// Terminal time of interest.
    pub horizon: f64,
    pub kernel: PowerKernel,
    pub vol: VolSpec,
}

#[derive(Deserialize)]
struct ModelParamsRepr {
    rho: f64,
    s0: f64,
    horizon: f64,
    kernel: PowerKernel,
    vol: VolSpec,
}

impl TryFrom<ModelParamsRepr> for ModelParams {
    type Error = CoreError;
    fn try_from(r: ModelParamsRepr) -> Result<Self> {
        ModelParams::new(r.rho, r.s0, r.horizon, r.kernel, r.vol)
    }
}

impl ModelParams {
    pub fn new(rho: f64, s0: f64, horizon: f64, kernel: PowerKernel, vol: VolSpec) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(CoreError::Domain(format!(
                "rho must lie in [-1, 1], got {rho}"
            )));
        }
        require_positive("s0", s0)?;
        require_positive("horizon", horizon)?;
        Ok(Self { rho, s0, horizon, kernel, vol })
    }

    /// Orthogonal weight `sqrt(1 - rho^2)` of the independent driver.
    pub fn rho_bar(&self) -> f64 {
        (1.0 - self.rho * self.rho).max(0.0).sqrt()
    }
}
