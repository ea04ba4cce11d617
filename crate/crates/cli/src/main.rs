use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fracperc_cli::config::RunConfig;
use fracperc_cli::{exit_code, run, workers_from_env};

/// Fractal percolation: limit curves, simulation, thresholds and self-checks.
#[derive(Parser)]
#[command(name = "fracperc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rescaled finite-level and limit curves of the Euler characteristic.
    Curves(Overrides),
    /// Monte Carlo estimates of the Minkowski functionals over a p-grid.
    Simulate(Overrides),
    /// Zeros and minimum of the limit curves for each M.
    Thresholds(Overrides),
    /// Checks formulas against enumeration, simulation and each other.
    Verify(Overrides),
    /// Writes one realization as a PBM bitmap.
    Render(Overrides),
    /// Exhaustive expectation of a functional on a tiny instance.
    Oracle(Overrides),
}

/// Settings shared by all subcommands; each flag overrides the config file.
#[derive(Args, Default)]
struct Overrides {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` setting; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(short, long)]
    m: Option<String>,
    /// Comma-separated list of M values.
    #[arg(long)]
    m_list: Option<String>,
    #[arg(short, long)]
    dim: Option<String>,
    /// Survival probability, decimal or fraction such as 1/5.
    #[arg(short, long)]
    p: Option<String>,
    #[arg(long)]
    p_start: Option<String>,
    #[arg(long)]
    p_stop: Option<String>,
    #[arg(long)]
    p_step: Option<String>,
    /// Construction level(s), comma-separated.
    #[arg(short = 'n', long)]
    levels: Option<String>,
    #[arg(short, long)]
    k: Option<String>,
    /// F or C.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    targets: Option<String>,
    /// V0, V1, V2, span.
    #[arg(long)]
    functionals: Option<String>,
    #[arg(short, long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Sample index of a rendered realization.
    #[arg(long)]
    index: Option<String>,
    /// 4 or 8.
    #[arg(long)]
    connectivity: Option<String>,
    /// shared or independent.
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long)]
    shards: Option<String>,
    /// custom, desk or full.
    #[arg(long)]
    protocol: Option<String>,
    /// Verify groups: oracle, limits, geometry, thresholds, montecarlo.
    #[arg(long)]
    groups: Option<String>,
    /// Bootstrap resamples for the Monte Carlo zero-crossing diagnostic.
    #[arg(long)]
    bootstrap: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(short, long)]
    output: Option<String>,
    #[arg(long)]
    manifest: Option<String>,
    /// Bitmap of the spanning cluster(s), for render.
    #[arg(long)]
    mask: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let fields = [
            ("m", &self.m),
            ("m_list", &self.m_list),
            ("dim", &self.dim),
            ("p", &self.p),
            ("p_start", &self.p_start),
            ("p_stop", &self.p_stop),
            ("p_step", &self.p_step),
            ("levels", &self.levels),
            ("k", &self.k),
            ("target", &self.target),
            ("targets", &self.targets),
            ("functionals", &self.functionals),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("index", &self.index),
            ("connectivity", &self.connectivity),
            ("coupling", &self.coupling),
            ("shards", &self.shards),
            ("protocol", &self.protocol),
            ("groups", &self.groups),
            ("bootstrap", &self.bootstrap),
            ("format", &self.format),
            ("output", &self.output),
            ("manifest", &self.manifest),
            ("mask", &self.mask),
        ];
        fields.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

fn build_config(cli: Cli) -> Result<RunConfig> {
    let (command, overrides) = match cli.command {
        Command::Curves(o) => ("curves", o),
        Command::Simulate(o) => ("simulate", o),
        Command::Thresholds(o) => ("thresholds", o),
        Command::Verify(o) => ("verify", o),
        Command::Render(o) => ("render", o),
        Command::Oracle(o) => ("oracle", o),
    };
    let mut cfg = RunConfig::default();
    if let Some(path) = &overrides.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_text(&text).with_context(|| format!("in {}", path.display()))?;
    }
    for item in &overrides.set {
        cfg.apply_text(item)?;
    }
    for (key, value) in overrides.pairs() {
        cfg.set(key, value)?;
    }
    cfg.set("command", command)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = workers_from_env().and_then(|workers| {
        if let Some(n) = workers {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting worker pool")?;
        }
        run(build_config(cli)?)
    });
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
