//! Command-line front end.
//!
//! Precedence, lowest first: built-in defaults, the `--config` JSON document,
//! then flags (`--epsilon`, `--seed`). Outputs go to `<root>/<command>/`
//! where the root is `--out`, else `AMO_OUT_DIR`, else `./amo-out`.

pub mod commands;
pub mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::output::config_hash;
pub use config::{output_root, RunConfig, RunManifest, Sink};

#[derive(Debug, Parser)]
#[command(name = "amo", version, about = "Multiscale analysis of the beta-cell metabolic oscillator")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration (biophysical, smolen, epsilon, seed).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output root directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override ε, keeping the O(1) prefactors.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Recompute and compare against the files listed in the existing manifest.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Reference scales, dimensionless groups and the published comparison table.
    Nondim {
        #[arg(long)]
        emit_scales: bool,
    },
    /// Integrate a registry model and write its trace.
    Simulate {
        #[arg(long, default_value = "biophysical-xy")]
        model: String,
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Option<Vec<f64>>,
        /// Also locate the limit cycle.
        #[arg(long)]
        cycle: bool,
    },
    /// Nullclines, folds, the equilibrium and the critical manifolds.
    Geometry,
    /// Parametrisation method on a slow manifold.
    Reduce {
        #[arg(long, default_value = "gamma4")]
        manifold: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// fiber-aligned, graph-preserving or orthogonal.
        #[arg(long)]
        right: Option<String>,
        /// Perturbation size for the residual-scaling check.
        #[arg(long, default_value_t = 2e-3)]
        delta: f64,
    },
    /// Equilibria, spectra and connections in one blow-up chart.
    Blowup {
        #[arg(long, default_value = "k1")]
        chart: String,
        /// Print the full JSON report.
        #[arg(long)]
        report: bool,
    },
    /// Surrogate cycles or fold points over a list of ε values.
    Sweep {
        #[arg(long, default_value = "hausdorff")]
        observable: String,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.2241,0.15,0.1")]
        eps: Vec<f64>,
    },
    /// Self-checks against the embedded published values.
    Report,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Nondim { .. } => "nondim",
            Command::Simulate { .. } => "simulate",
            Command::Geometry => "geometry",
            Command::Reduce { .. } => "reduce",
            Command::Blowup { .. } => "blowup",
            Command::Sweep { .. } => "sweep",
            Command::Report => "report",
        }
    }
}

/// 0 success, 2 usage, 3 numeric failure, 4 verification mismatch.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::UnknownId { .. } | Error::Domain { .. } | Error::Json(_) => 2,
        Error::Verify(_) => 4,
        _ => 3,
    }
}

pub fn effective_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(e) = common.epsilon {
        cfg.epsilon = Some(e);
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn dispatch(cmd: &Command, cfg: &RunConfig, jobs: Option<usize>, sink: &mut Sink) -> Result<String> {
    match cmd {
        Command::Nondim { emit_scales } => commands::nondim(cfg, *emit_scales, sink),
        Command::Simulate {
            model,
            duration,
            start,
            cycle,
        } => commands::simulate(cfg, model, *duration, start.clone(), *cycle, sink),
        Command::Geometry => commands::geometry(cfg, sink),
        Command::Reduce {
            manifold,
            order,
            grid,
            right,
            delta,
        } => commands::reduce(cfg, manifold, *order, grid.clone(), right.as_deref(), *delta, sink),
        Command::Blowup { chart, report } => commands::blowup(cfg, chart, *report, sink),
        Command::Sweep { observable, eps } => commands::sweep(cfg, observable, eps, jobs, sink),
        Command::Report => commands::report(cfg, sink),
    }
}

/// Run one command into `dir`, writing its manifest. Returns the manifest and stdout text.
pub fn execute(cmd: &Command, cfg: &RunConfig, jobs: Option<usize>, dir: &Path) -> Result<(RunManifest, String)> {
    let start = Instant::now();
    let mut sink = Sink::new(dir.to_path_buf())?;
    let text = dispatch(cmd, cfg, jobs, &mut sink)?;
    let arguments = serde_json::to_value(cmd)?;
    let manifest = RunManifest {
        command: cmd.name().into(),
        config_hash: config_hash(&serde_json::json!({ "command": &arguments, "config": cfg }))?,
        arguments,
        config: cfg.clone(),
        parameters: cfg.epsilon_params()?,
        outputs: sink.files,
        wall_time_s: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").into(),
    };
    manifest.write(dir)?;
    Ok((manifest, text))
}

/// Re-run the command recorded in `dir` and compare every listed output byte for byte.
pub fn verify(cmd: &Command, cfg: &RunConfig, jobs: Option<usize>, dir: &Path) -> Result<String> {
    let recorded = RunManifest::read(dir)?;
    let scratch = tempfile::tempdir()?;
    let (fresh, _) = execute(cmd, cfg, jobs, scratch.path())?;
    if fresh.config_hash != recorded.config_hash {
        return Err(Error::Verify(format!(
            "config hash {} differs from recorded {}",
            fresh.config_hash, recorded.config_hash
        )));
    }
    let mut bad = Vec::new();
    for name in &recorded.outputs {
        let old = fs::read(dir.join(name)).ok();
        let new = fs::read(scratch.path().join(name)).ok();
        if old.is_none() || old != new {
            bad.push(name.clone());
        }
    }
    if !bad.is_empty() {
        return Err(Error::Verify(format!("outputs differ: {}", bad.join(", "))));
    }
    Ok(format!("verified {} outputs in {}\n", recorded.outputs.len(), dir.display()))
}

pub fn run(cli: &Cli) -> Result<String> {
    let cfg = effective_config(&cli.common)?;
    let dir = output_root(cli.common.out.as_deref()).join(cli.command.name());
    if cli.common.verify {
        return verify(&cli.command, &cfg, cli.common.jobs, &dir);
    }
    let (_, text) = execute(&cli.command, &cfg, cli.common.jobs, &dir)?;
    Ok(text)
}

/// Process entry point; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
