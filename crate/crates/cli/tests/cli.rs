//! End-to-end checks of the `roughvol` binary: byte-exact reproducibility,
//! thread-count invariance, the exit-code taxonomy, and the shipped presets.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use roughvol_cli::config::{
    revalidate_problem, BoundConfig, CovcheckConfig, DefectConfig, MomentConfig, SimulateConfig,
    VolterraConfig,
};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_roughvol")
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(bin())
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("failed to spawn the roughvol binary")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "command failed (status {:?}): {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("missing {name}: {e}"))
}

/// Small enough to run quickly through the unoptimized test binary.
const SMALL_SIMULATE: &str = r#"{
  "model": {
    "rho": -0.5,
    "s0": 1.0,
    "horizon": 1.0,
    "kernel": { "alpha": 0.8 },
    "vol": { "family": "exponential", "eta": 1.0, "zeta": { "ts": [0.0], "vs": [0.3] } }
  },
  "mc": {
    "n_paths": 2000,
    "grid": { "t_horizon": 1.0, "n": 16 },
    "master_seed": 42,
    "explosion_cap": 1e12,
    "antithetic": false
  }
}"#;

#[test]
fn rerun_produces_byte_identical_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = presets_dir().join("criterion-02-bound.json");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_success(&run("bound", &cfg, &a, &[]));
    assert_success(&run("bound", &cfg, &b, &[]));
    assert_eq!(read(&a, "bound.csv"), read(&b, "bound.csv"));
    assert_eq!(read(&a, "summary.json"), read(&b, "summary.json"));
    let meta: serde_json::Value = serde_json::from_slice(&read(&a, "meta.json")).unwrap();
    assert_eq!(meta["subcommand"], "bound");
    assert_eq!(meta["effective_seed"], serde_json::Value::Null);
}

#[test]
fn thread_count_never_changes_the_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("simulate.json");
    fs::write(&cfg, SMALL_SIMULATE).unwrap();
    let (one, four) = (tmp.path().join("t1"), tmp.path().join("t4"));
    assert_success(&run("simulate", &cfg, &one, &["--threads", "1"]));
    assert_success(&run("simulate", &cfg, &four, &["--threads", "4"]));
    assert_eq!(read(&one, "simulate.csv"), read(&four, "simulate.csv"));
    assert_eq!(read(&one, "summary.json"), read(&four, "summary.json"));
}

#[test]
fn seed_override_is_recorded_and_steers_the_sampler() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("simulate.json");
    fs::write(&cfg, SMALL_SIMULATE).unwrap();
    let (s1a, s1b, s2) = (
        tmp.path().join("s1a"),
        tmp.path().join("s1b"),
        tmp.path().join("s2"),
    );
    assert_success(&run("simulate", &cfg, &s1a, &["--seed", "1"]));
    assert_success(&run("simulate", &cfg, &s1b, &["--seed", "1"]));
    assert_success(&run("simulate", &cfg, &s2, &["--seed", "2"]));
    assert_eq!(read(&s1a, "simulate.csv"), read(&s1b, "simulate.csv"));
    assert_ne!(read(&s1a, "simulate.csv"), read(&s2, "simulate.csv"));
    let meta: serde_json::Value = serde_json::from_slice(&read(&s2, "meta.json")).unwrap();
    assert_eq!(meta["seed_override"], 2);
    assert_eq!(meta["effective_seed"], 2);
}

#[test]
fn malformed_configs_exit_2_without_crashing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");

    let garbled = tmp.path().join("garbled.json");
    fs::write(&garbled, "{ this is not json").unwrap();
    let res = run("volterra", &garbled, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("config"));

    let unknown_key = tmp.path().join("unknown.json");
    fs::write(
        &unknown_key,
        r#"{
          "problem": {
            "kernel": { "alpha": 1.0 },
            "forcing": { "kind": "affine", "slope": 1.0, "offset": 1.0 },
            "nonlinearity": { "kind": "analytic_power", "c": 1.0, "p": 2 }
          },
          "t_horizon": 3.0,
          "steps": [16],
          "stepz": 1
        }"#,
    )
    .unwrap();
    let res = run("volterra", &unknown_key, &out, &[]);
    assert_eq!(res.status.code(), Some(2));

    let missing = tmp.path().join("nope.json");
    let res = run("bound", &missing, &out, &[]);
    assert_eq!(res.status.code(), Some(2));

    let bad_domain = tmp.path().join("bad_alpha.json");
    fs::write(
        &bad_domain,
        r#"{
          "problem": {
            "kernel": { "alpha": 0.3 },
            "forcing": { "kind": "affine", "slope": 1.0, "offset": 1.0 },
            "nonlinearity": { "kind": "analytic_power", "c": 1.0, "p": 2 }
          },
          "t_horizon": 3.0
        }"#,
    )
    .unwrap();
    let res = run("bound", &bad_domain, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn infeasible_moment_exits_2_and_names_the_condition() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = presets_dir().join("criterion-08-moment-infeasible.json");
    let res = run("moment", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr).into_owned();
    assert!(
        stderr.contains("ρ² < (m−1)/m"),
        "stderr must quote the feasibility condition, got: {stderr}"
    );
}

#[test]
fn every_preset_parses_with_its_subcommands_config() {
    const SUBCOMMANDS: [&str; 6] =
        ["bound", "volterra", "simulate", "defect", "moment", "covcheck"];
    let mut seen = 0usize;
    for entry in fs::read_dir(presets_dir()).expect("presets directory") {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        seen += 1;
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let sub = stem
            .split('-')
            .find(|t| SUBCOMMANDS.contains(t))
            .unwrap_or_else(|| panic!("{stem}: file name must contain its subcommand"));
        let text = fs::read_to_string(&path).unwrap();
        let check: Result<(), String> = match sub {
            "bound" => serde_json::from_str::<BoundConfig>(&text)
                .map_err(|e| e.to_string())
                .and_then(|c| revalidate_problem(&c.problem).map(drop).map_err(|e| e.to_string())),
            "volterra" => serde_json::from_str::<VolterraConfig>(&text)
                .map_err(|e| e.to_string())
                .and_then(|c| revalidate_problem(&c.problem).map(drop).map_err(|e| e.to_string())),
            "simulate" => serde_json::from_str::<SimulateConfig>(&text)
                .map(drop)
                .map_err(|e| e.to_string()),
            "defect" => serde_json::from_str::<DefectConfig>(&text)
                .map(drop)
                .map_err(|e| e.to_string()),
            "moment" => serde_json::from_str::<MomentConfig>(&text)
                .map(drop)
                .map_err(|e| e.to_string()),
            "covcheck" => serde_json::from_str::<CovcheckConfig>(&text)
                .map(drop)
                .map_err(|e| e.to_string()),
            _ => unreachable!(),
        };
        check.unwrap_or_else(|e| panic!("preset {stem} does not parse: {e}"));
    }
    assert!(seen >= 13, "expected the full preset set, found {seen}");
}

#[test]
fn bound_presets_reproduce_the_certified_values_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();

    let extract_bound = |dir: &Path| -> f64 {
        let csv = String::from_utf8(read(dir, "bound.csv")).unwrap();
        let row = csv
            .lines()
            .find(|l| l.starts_with("bound,"))
            .expect("bound row present");
        row.rsplit(',').next().unwrap().parse().unwrap()
    };

    // Nested output path: directories are created on demand.
    let out = tmp.path().join("runs/base/bound");
    assert_success(&run("bound", &presets_dir().join("criterion-02-bound.json"), &out, &[]));
    assert!((extract_bound(&out) - 3.0).abs() <= 1e-6);

    let out_fast = tmp.path().join("runs/fast");
    assert_success(&run(
        "bound",
        &presets_dir().join("criterion-02-bound-fast-forcing.json"),
        &out_fast,
        &[],
    ));
    let oracle = (2.0 * 2.0f64.sqrt() + 1.0) / 2.0;
    assert!((extract_bound(&out_fast) - oracle).abs() <= 1e-6);
}
