//! `covcheck`: correctness diagnostics for the Gaussian machinery.
//!
//! Four independent checks share one long-format CSV, discriminated by the
//! `section` column:
//!
//! * `sweep`    — closed-form moments vs their quadrature twins across
//!   kernel exponents (plus Brownian identities at exponent 1),
//! * `sample`   — sampled joint covariance scored entrywise in SE units,
//!   with the Cholesky jitter that the factorization needed,
//! * `theta`    — grid estimate of the increment-modulus function with a
//!   Dudley entropy-integral diagnostic in the summary,
//! * `corridor` — band-stay probabilities (tilted unit band, node-wise).

use serde::Serialize;

use roughvol_core::{
    build_joint_factor, continuity_modulus, corridor_probability, covariance_check,
    dudley_diagnostic, CorridorEstimate, CovarianceCheck, DudleyReport, PowerKernel,
};

use crate::config::{load, CovcheckConfig};
use crate::output::{g17, opt_g17, Csv, OutDir};
use crate::{CliError, RunArgs};

const COLUMNS: [&str; 13] = [
    "section", "alpha", "rho", "t", "u", "lambda", "quantity", "value", "reference", "rel_err",
    "std_error", "wilson_lo", "wilson_hi",
];

/// One row of the long-format table; fields that do not apply stay empty.
#[allow(clippy::too_many_arguments)]
fn push_row(
    csv: &mut Csv,
    section: &str,
    alpha: Option<f64>,
    rho: Option<f64>,
    t: Option<f64>,
    u: Option<f64>,
    lambda: Option<f64>,
    quantity: &str,
    value: f64,
    reference: Option<f64>,
    std_error: Option<f64>,
    wilson: Option<(f64, f64)>,
) {
    let rel_err = reference.map(|r| (value - r).abs() / r.abs().max(f64::MIN_POSITIVE));
    csv.row(&[
        section.into(),
        opt_g17(alpha),
        opt_g17(rho),
        opt_g17(t),
        opt_g17(u),
        opt_g17(lambda),
        quantity.into(),
        g17(value),
        opt_g17(reference),
        opt_g17(rel_err),
        opt_g17(std_error),
        opt_g17(wilson.map(|w| w.0)),
        opt_g17(wilson.map(|w| w.1)),
    ]);
}

#[derive(Serialize)]
struct SampleSummary {
    seed: u64,
    jitter: f64,
    check: CovarianceCheck,
}

#[derive(Serialize)]
struct ModulusSummary {
    lags: Vec<f64>,
    thetas: Vec<f64>,
    dudley: DudleyReport,
}

#[derive(Serialize)]
struct CorridorSummary {
    alpha: f64,
    lambda: f64,
    seed: u64,
    estimate: CorridorEstimate,
}

#[derive(Serialize)]
struct Summary {
    kernel_alpha: f64,
    rho: f64,
    sweep_rows: usize,
    sweep_max_rel_err: f64,
    sample: Option<SampleSummary>,
    modulus: Option<ModulusSummary>,
    corridor: Vec<CorridorSummary>,
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let cfg: CovcheckConfig = load(&args.config)?;
    let mut csv = Csv::new(&COLUMNS);

    let mut sweep_rows = 0usize;
    let mut sweep_max_rel_err = 0.0f64;
    let mut sweep =
        |csv: &mut Csv, alpha, rho, t, u, quantity: &str, value: f64, reference: f64| {
            sweep_rows += 1;
            let rel = (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
            sweep_max_rel_err = sweep_max_rel_err.max(rel);
            push_row(csv, "sweep", Some(alpha), rho, Some(t), u, None, quantity, value,
                Some(reference), None, None);
        };

    for &alpha in &cfg.alphas {
        let kernel = PowerKernel::new(alpha)?;
        for &t in &cfg.t_values {
            sweep(
                &mut csv, alpha, None, t, None,
                "var_y",
                kernel.variance_y(t),
                kernel.variance_y_quadrature(t)?,
            );
            // The solver's product-integration weights must telescope to
            // t^alpha: this row watches the path the Volterra solves use.
            sweep(
                &mut csv, alpha, None, t, None,
                "weights_telescope",
                kernel.grid_weights(t / 64.0, 64).iter().sum::<f64>(),
                t.powf(alpha),
            );
            for &u in &cfg.t_values {
                sweep(
                    &mut csv, alpha, Some(cfg.rho), t, Some(u),
                    "cross_yw",
                    kernel.cross_cov_yw(cfg.rho, t, u)?,
                    kernel.cross_cov_yw_quadrature(cfg.rho, t, u)?,
                );
                // At exponent 1 the process is the driving noise itself, so
                // its covariance must be the Brownian min(t, u) exactly.
                if alpha == 1.0 {
                    sweep(
                        &mut csv, alpha, None, t, Some(u),
                        "cov_yy_brownian",
                        kernel.covariance_yy(t, u)?,
                        t.min(u),
                    );
                }
            }
        }
    }

    let sample = match &cfg.sample {
        Some(block) => {
            let factor = build_joint_factor(cfg.kernel, cfg.rho, block.grid)?;
            let seed = args.seed.unwrap_or(block.seed);
            let check = covariance_check(&factor, seed, block.n_paths)?;
            let jitter = factor.factor.jitter;
            push_row(
                &mut csv, "sample", Some(cfg.kernel.alpha()), Some(cfg.rho), None, None, None,
                "max_abs_z", check.max_abs_z, None, None, None,
            );
            push_row(
                &mut csv, "sample", Some(cfg.kernel.alpha()), Some(cfg.rho), None, None, None,
                "cholesky_jitter", jitter, None, None, None,
            );
            Some(SampleSummary { seed, jitter, check })
        }
        None => None,
    };

    let modulus = match &cfg.modulus {
        Some(block) => {
            let thetas =
                continuity_modulus(&cfg.kernel, block.t_horizon, &block.lags, block.grid_points)?;
            for (&lag, &theta) in block.lags.iter().zip(&thetas) {
                push_row(
                    &mut csv, "theta", Some(cfg.kernel.alpha()), None, Some(lag), None, None,
                    "theta_t", theta, None, None, None,
                );
            }
            let dudley = dudley_diagnostic(&block.lags, &thetas)?;
            Some(ModulusSummary { lags: block.lags.clone(), thetas, dudley })
        }
        None => None,
    };

    let mut corridor = Vec::with_capacity(cfg.corridor.len());
    for (i, block) in cfg.corridor.iter().enumerate() {
        let seed = args.seed.map(|s| s + 1 + i as u64).unwrap_or(block.seed);
        let est = corridor_probability(block.kernel, block.lambda, block.grid, seed, block.n_paths)?;
        push_row(
            &mut csv, "corridor", Some(block.kernel.alpha()), None, None, None,
            Some(block.lambda),
            "band_probability", est.probability, None, Some(est.std_error), Some(est.wilson95),
        );
        corridor.push(CorridorSummary {
            alpha: block.kernel.alpha(),
            lambda: block.lambda,
            seed,
            estimate: est,
        });
    }

    let summary = Summary {
        kernel_alpha: cfg.kernel.alpha(),
        rho: cfg.rho,
        sweep_rows,
        sweep_max_rel_err,
        sample,
        modulus,
        corridor,
    };

    let out = OutDir::create(&args.out)?;
    out.write_text("covcheck.csv", &csv.finish())?;
    out.write_json("summary.json", &summary)?;
    out.write_meta("covcheck", args, args.seed)?;

    println!(
        "sweep: {} comparisons, max relative error {}",
        summary.sweep_rows,
        g17(summary.sweep_max_rel_err)
    );
    if let Some(s) = &summary.sample {
        println!(
            "sample covariance: max |z| = {} over {} entries ({} paths)",
            g17(s.check.max_abs_z),
            s.check.entries,
            s.check.n_paths
        );
        if s.jitter > 0.0 {
            println!("cholesky jitter escalated to {}", g17(s.jitter));
        } else {
            println!("cholesky succeeded without jitter");
        }
    }
    if let Some(m) = &summary.modulus {
        println!(
            "dudley integral over sampled lags: {} (converged: {})",
            g17(m.dudley.integral),
            m.dudley.converged
        );
    }
    for c in &summary.corridor {
        println!(
            "corridor alpha = {}, lambda = {}: probability {} (wilson95 [{}, {}])",
            c.alpha,
            c.lambda,
            g17(c.estimate.probability),
            g17(c.estimate.wilson95.0),
            g17(c.estimate.wilson95.1)
        );
    }
    Ok(())
}
