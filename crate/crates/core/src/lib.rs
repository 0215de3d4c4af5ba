//! Rough-volatility toolkit: model primitives, deterministic Volterra
//! blow-up analysis, exact Gaussian path simulation, and Monte Carlo
//! experiments for martingale defects and moment explosions.
//!
//! Layout:
//! - [`kernel`], [`vol`], [`model`]: the power kernel with its closed-form
//!   covariances, volatility families with saturation and growth diagnostics,
//!   and the assembled model parameters.
//! - [`volterra`]: deterministic blow-up solver, comparison checks, and
//!   explosion-time upper bounds (integral and geometric-levels forms).
//! - [`gauss`], [`modulus`]: exact joint (Y, W) sampling via Cholesky
//!   factors, drift convolution, corridor probabilities, and continuity
//!   modulus / entropy-integral diagnostics.
//! - [`mc`]: price simulation, the conditional estimator, drifted Volterra
//!   paths, hitting-probability ladders, and variational lower bounds.
//! - [`quad`], [`linalg`], [`rng`], [`stats`]: shared numerics.

pub mod error;
pub mod gauss;
pub mod kernel;
pub mod linalg;
pub mod mc;
pub mod model;
pub mod modulus;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod vol;
pub mod volterra;

pub use error::{CoreError, Result};
pub use gauss::{
    build_joint_factor, build_y_factor, cameron_martin_map, convolve_drift, corridor_probability,
    covariance_check, sample_joint_path, sample_joint_paths, sample_joint_paths_range,
    sample_y_path, CorridorEstimate, CovarianceCheck, Grid, JointFactor, PathBundle, YFactor,
};
pub use kernel::PowerKernel;
pub use mc::{
    boue_dupuis_lower_bound, boue_dupuis_payoffs, choose_gamma, conditional_price_estimator,
    drifted_volterra_paths, martingale_defect, price_terminal_estimate, simulate_price_paths,
    truncated_moment, Barrier, ControlConfig, DefectReport, DriftSpec, MCConfig, MCResult,
    PricePaths,
};
pub use model::ModelParams;
pub use modulus::{continuity_modulus, dudley_diagnostic, DudleyReport};
pub use rng::{fill_standard_normals, path_rng, standard_normals};
pub use stats::{summarize, wilson_interval, SampleStats, Z_95};
pub use vol::{osgood_check, OsgoodReport, PiecewiseLinear, VolSpec, SIGMA_SAT};
pub use volterra::{
    check_comparison, explosion_bound, explosion_bound_geometric, richardson_first_order,
    solve_volterra, BlowUpReport, ComparisonDirection, ComparisonReport, ExplosionBound, Forcing,
    GeometricBound, Nonlinearity, VolterraProblem,
};
