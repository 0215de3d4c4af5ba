//! `simulate`: Monte Carlo price estimators on one model/grid pair.
//!
//! Runs both the plain terminal estimator E[S_T]/S_0 and the conditional
//! (mixed) estimator that integrates out the independent noise component;
//! in discrete time the latter telescopes to exactly 1, so its distance
//! from 1 is a discretization/explosion diagnostic, not statistical noise.

use serde::Serialize;

use roughvol_core::{conditional_price_estimator, price_terminal_estimate, MCResult};

use crate::config::{load, override_seed, SimulateConfig};
use crate::output::{g17, Csv, OutDir};
use crate::{CliError, RunArgs};

#[derive(Serialize)]
struct Summary {
    terminal: MCResult,
    conditional: MCResult,
}

fn push_row(csv: &mut Csv, name: &str, r: &MCResult) {
    csv.row(&[
        name.into(),
        g17(r.mean),
        g17(r.std_error),
        g17(r.ci95.0),
        g17(r.ci95.1),
        r.n_paths.to_string(),
        r.n_exploded.to_string(),
    ]);
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let cfg: SimulateConfig = load(&args.config)?;
    let mc = override_seed(cfg.mc, args.seed);

    let terminal = price_terminal_estimate(&cfg.model, &mc)?;
    let conditional = conditional_price_estimator(&cfg.model, &mc)?;

    let mut csv = Csv::new(&[
        "estimator",
        "mean",
        "std_error",
        "ci_lo",
        "ci_hi",
        "n_paths",
        "n_exploded",
    ]);
    push_row(&mut csv, "terminal", &terminal);
    push_row(&mut csv, "conditional", &conditional);

    let out = OutDir::create(&args.out)?;
    out.write_text("simulate.csv", &csv.finish())?;
    out.write_json("summary.json", &Summary { terminal: terminal.clone(), conditional: conditional.clone() })?;
    out.write_meta("simulate", args, Some(mc.master_seed))?;

    println!(
        "terminal mean: {} +- {} ({} exploded)",
        g17(terminal.mean),
        g17(terminal.std_error),
        terminal.n_exploded
    );
    println!(
        "conditional mean: {} +- {} ({} exploded)",
        g17(conditional.mean),
        g17(conditional.std_error),
        conditional.n_exploded
    );
    Ok(())
}
