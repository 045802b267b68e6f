use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::commands::{run, Outcome, Status};
use crate::config::{hex, ExperimentConfig, Overrides, UsageError};

#[derive(Parser, Debug)]
#[command(name = "hyperorbit", version, about = "Recurrence experiments for weighted shifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower/upper natural and Banach densities of a set.
    Densities(Overrides),
    /// Writes a set description and its members up to the horizon.
    MakeSet(Overrides),
    /// Checks the pairwise gap condition of a set family.
    CheckFamily(Overrides),
    /// Exhaustive checks on the c_0 counterexample.
    VerifyCounterexample(Overrides),
    /// Prefix densities of the sets D_j.
    DjScan(Overrides),
    /// Builds a hypercyclic vector with certificates.
    Construct(Overrides),
    /// Hitting times of an orbit in balls around dense targets.
    Orbit(Overrides),
    /// Recurrence class suggested by the hitting-time densities.
    Classify(Overrides),
    /// Verified return times between pairs of balls.
    ReturnSet(Overrides),
    /// Correlation estimates and the set F.
    Correlate(Overrides),
    /// The sequence beta_n of a set under an alpha profile.
    Beta(Overrides),
    /// The two weight sums along a set.
    Eqbeta(Overrides),
    /// Series and mixing tests on the weights.
    SeriesTests(Overrides),
}

impl Command {
    pub fn parts(&self) -> (&'static str, &Overrides) {
        match self {
            Command::Densities(o) => ("densities", o),
            Command::MakeSet(o) => ("make-set", o),
            Command::CheckFamily(o) => ("check-family", o),
            Command::VerifyCounterexample(o) => ("verify-counterexample", o),
            Command::DjScan(o) => ("dj-scan", o),
            Command::Construct(o) => ("construct", o),
            Command::Orbit(o) => ("orbit", o),
            Command::Classify(o) => ("classify", o),
            Command::ReturnSet(o) => ("return-set", o),
            Command::Correlate(o) => ("correlate", o),
            Command::Beta(o) => ("beta", o),
            Command::Eqbeta(o) => ("eqbeta", o),
            Command::SeriesTests(o) => ("series-tests", o),
        }
    }
}

/// 2 for invalid input, 3 for failed checks, 1 for anything else.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    use hyperorbit::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(
            E::InvalidArgument(_)
            | E::Parse(_)
            | E::HorizonTooSmall { .. }
            | E::SpaceMismatch { .. }
            | E::ProfileViolation { .. },
        ) => 2,
        Some(_) => 3,
        None => 1,
    }
}

/// Flag, then `HYPERORBIT_WORKERS`, then the config, then all cores.
fn worker_count(flag: Option<usize>, cfg: &ExperimentConfig) -> Result<usize> {
    let env = match std::env::var("HYPERORBIT_WORKERS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| crate::config::usage(format!("bad HYPERORBIT_WORKERS {v:?}")))?,
        ),
        Err(_) => None,
    };
    let chosen = flag
        .or(env)
        .or((cfg.workers > 0).then_some(cfg.workers))
        .unwrap_or(0);
    Ok(if chosen == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        chosen
    })
}

fn sha256(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn write_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    outcome: &Outcome,
    workers: usize,
    millis: u128,
) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut manifest = format!(
        "command {}\nversion {}\nconfig_sha256 {}\n",
        cfg.command,
        env!("CARGO_PKG_VERSION"),
        cfg.hash()
    );
    for (name, body) in &outcome.files {
        std::fs::write(dir.join(name), body).with_context(|| format!("writing {name}"))?;
        manifest.push_str(&format!("output {name} sha256={}\n", sha256(body.as_bytes())));
    }
    std::fs::write(dir.join("config.toml"), cfg.to_toml()).context("writing config.toml")?;
    manifest.push_str(&format!(
        "status {}\nworkers {workers}\nwall_time_ms {millis}\n",
        outcome.status.describe()
    ));
    std::fs::write(dir.join("manifest.txt"), manifest).context("writing manifest.txt")?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<Status> {
    let (name, overrides) = cli.command.parts();
    let mut cfg = overrides.resolve(name)?;
    let workers = worker_count(overrides.workers, &cfg)?;
    cfg.workers = workers;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .context("starting the worker pool")?;
    let dir = Path::new(&cfg.out).to_path_buf();
    let start = Instant::now();
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            // failed checks still leave a manifest naming the failure
            if exit_code_for(&e) == 3 {
                let failed = Outcome {
                    files: Vec::new(),
                    status: Status::Failed(e.to_string()),
                };
                write_outputs(&dir, &cfg, &failed, workers, start.elapsed().as_millis())?;
            }
            return Err(e);
        }
    };
    write_outputs(&dir, &cfg, &outcome, workers, start.elapsed().as_millis())?;
    Ok(outcome.status)
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(status) => {
            match &status {
                Status::Ok => println!("ok"),
                s => eprintln!("{}", s.describe()),
            }
            status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}
