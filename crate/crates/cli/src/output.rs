//! Deterministic output writers.
//!
//! CSV bodies and `summary.json` must be byte-identical across reruns of the
//! same config, so every float goes through one formatter and all iteration
//! follows config order. `meta.json` is the designated home for anything
//! run-specific (timestamp, paths, flag values).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::{CliError, RunArgs};

/// `{:.16e}` renders 17 significant digits, enough for a lossless f64
/// round-trip, and spells infinities as `inf`/`-inf`.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_g17(x: Option<f64>) -> String {
    x.map(g17).unwrap_or_default()
}

/// Comma-separated table with a fixed column count per row.
pub struct Csv {
    buf: String,
    cols: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv { buf, cols: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.cols, "ragged CSV row");
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(path: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(path)?;
        Ok(OutDir { dir: path.to_path_buf() })
    }

    pub fn write_text(&self, name: &str, body: &str) -> Result<(), CliError> {
        let mut file = fs::File::create(self.dir.join(name))?;
        file.write_all(body.as_bytes())?;
        Ok(())
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        self.write_text(name, &body)
    }

    /// Provenance record; `effective_seed` is the master seed the run
    /// actually used (None for the deterministic subcommands).
    pub fn write_meta(
        &self,
        subcommand: &str,
        args: &RunArgs,
        effective_seed: Option<u64>,
    ) -> Result<(), CliError> {
        #[derive(Serialize)]
        struct Meta<'a> {
            subcommand: &'a str,
            config: String,
            seed_override: Option<u64>,
            effective_seed: Option<u64>,
            threads: Option<usize>,
            version: &'a str,
            unix_time_seconds: u64,
        }
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.write_json(
            "meta.json",
            &Meta {
                subcommand,
                config: args.config.display().to_string(),
                seed_override: args.seed,
                effective_seed,
                threads: args.threads,
                version: env!("CARGO_PKG_VERSION"),
                unix_time_seconds: now,
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_is_lossless_and_renders_inf() {
        assert_eq!(g17(3.0), "3.0000000000000000e0");
        assert_eq!(g17(f64::INFINITY), "inf");
        assert_eq!(g17(f64::NEG_INFINITY), "-inf");
        let x = 0.1 + 0.2;
        assert_eq!(g17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout_is_plain() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".into(), g17(2.0)]);
        assert_eq!(csv.finish(), "a,b\n1,2.0000000000000000e0\n");
    }
}
