use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything a run needs. Loading fills every field, so the file written
/// next to the outputs is a complete record of the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    pub out: String,
    /// Worker threads; 0 means available parallelism. Not part of the hash.
    pub workers: usize,
    pub set: String,
    pub horizon: u64,
    pub windows: Vec<u64>,
    pub operator: String,
    pub space: String,
    pub family: String,
    pub levels: usize,
    pub depth: usize,
    pub truncation_pad: u64,
    pub kmax: u64,
    pub lmax: u64,
    pub block_kmax: usize,
    pub reps: usize,
    pub js: Vec<u64>,
    pub targets: usize,
    pub radius: f64,
    pub theta: f64,
    pub overflow_cap: f64,
    pub probe_grid: usize,
    pub epsilon: String,
    pub corr_kmax: u64,
    pub alpha: String,
    pub alpha_c: f64,
    /// `N` of the alpha profile; absent for `+∞`.
    pub alpha_cutoff: Option<i64>,
    pub p: f64,
    pub samples: usize,
    pub bilateral: bool,
    /// Sparse vector file for `orbit`; absent means the constructed vector.
    pub vector: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: String::new(),
            out: "out".into(),
            workers: 0,
            set: "evens".into(),
            horizon: 10_000,
            windows: vec![100],
            operator: "rolewicz2".into(),
            space: "l2".into(),
            family: "dyadic-block".into(),
            levels: 16,
            depth: 4,
            truncation_pad: 64,
            kmax: 6,
            lmax: 100,
            block_kmax: 3,
            reps: 3,
            js: vec![1, 2, 3, 4, 5],
            targets: 4,
            radius: 0.5,
            theta: 0.01,
            overflow_cap: 1e300,
            probe_grid: 8,
            epsilon: "1/2".into(),
            corr_kmax: 60,
            alpha: "ones".into(),
            alpha_c: 1.0,
            alpha_cutoff: None,
            p: 2.0,
            samples: 50,
            bilateral: false,
            vector: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| usage(format!("bad config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the serialized config with `workers` cleared.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.workers = 0;
        let digest = Sha256::digest(c.to_toml().as_bytes());
        hex(&digest)
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// An invalid invocation; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Set in short form, e.g. `evens`, `periodic:5:0,2`, `factorial`.
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Comma-separated window lengths.
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<u64>>,
    /// `rolewicz2`, `constant:C`, `ratio-power:P` or `counterexample-c0`.
    #[arg(long)]
    pub operator: Option<String>,
    /// `l2`, `l1.5`, `c0`, optionally suffixed with `(Z)`.
    #[arg(long)]
    pub space: Option<String>,
    /// `dyadic-block`, `prime-power` or `block-c0`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub truncation_pad: Option<u64>,
    #[arg(long)]
    pub kmax: Option<u64>,
    #[arg(long)]
    pub lmax: Option<u64>,
    /// Levels of the block family checked by `verify-counterexample`.
    #[arg(long)]
    pub block_kmax: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub js: Option<Vec<u64>>,
    #[arg(long)]
    pub targets: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub overflow_cap: Option<f64>,
    #[arg(long)]
    pub probe_grid: Option<usize>,
    /// Exact ratio such as `1/2`.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub corr_kmax: Option<u64>,
    /// `ones`, `harmonic` or `inverse-products`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub alpha_c: Option<f64>,
    #[arg(long)]
    pub alpha_cutoff: Option<i64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub bilateral: Option<bool>,
    #[arg(long)]
    pub vector: Option<String>,
}

macro_rules! apply {
    ($cfg:ident, $o:ident, $($f:ident),*) => {
        $( if let Some(v) = $o.$f.clone() { $cfg.$f = v; } )*
    };
}

impl Overrides {
    pub fn resolve(&self, command: &str) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if !c.command.is_empty() && c.command != command {
            return Err(usage(format!(
                "config is for `{}`, not `{command}`",
                c.command
            )));
        }
        c.command = command.to_string();
        let o = self;
        apply!(
            c, o, out, workers, set, horizon, windows, operator, space, family, levels, depth,
            truncation_pad, kmax, lmax, block_kmax, reps, js, targets, radius, theta, overflow_cap,
            probe_grid, epsilon, corr_kmax, alpha, alpha_c, p, samples, bilateral
        );
        if let Some(v) = &o.alpha_cutoff {
            c.alpha_cutoff = Some(*v);
        }
        if let Some(v) = &o.vector {
            c.vector = Some(v.clone());
        }
        Ok(c)
    }
}
