//! Implementations of the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fracperc::analytic::{
    ev_vk, large_m_v, large_m_vc, limit_vck_2d, limit_vk_2d, ExactParams, ModelParams, Target,
};
use fracperc::geometry::{label, Axis};
use fracperc::montecarlo::{fmt_float, run_protocol, write_csv, Experiment, Functional, Protocol, SampleSchedule};
use fracperc::oracle::{enumerate_1d, enumerate_2d, Quantity1D, Set1D};
use fracperc::sampler::{complement, Sampler, DEFAULT_BUDGET_BYTES};
use fracperc::thresholds::{mc_zero_crossing, threshold_report, ZeroCrossing};
use fracperc::Scalar;
use serde::Serialize;

use crate::config::{Format, ProtocolKind, RunConfig};
use crate::verify::{verify, Analytic, VerifyReport};

/// Opens `path` for writing, or stdout when absent.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn rescaled(par: &ModelParams, n: u32, target: Target) -> Result<f64> {
    Ok(ev_vk(par, n, 0, target)? * par.rescale(n, 0)?)
}

/// Finite-level rescaled Euler characteristics for `cfg.m` and each level, plus the limit.
pub fn write_level_curves(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let mut header = vec!["p".to_string()];
    for target in [Target::F, Target::C] {
        header.extend(cfg.levels.iter().map(|n| format!("{target}_n{n}")));
        header.push(format!("{target}_inf"));
    }
    writeln!(out, "{}", header.join(","))?;
    for p in cfg.p_values()? {
        let par = ModelParams::new(cfg.m, p, 2)?;
        let mut row = vec![fmt_float(p)];
        for target in [Target::F, Target::C] {
            for &n in &cfg.levels {
                row.push(fmt_float(rescaled(&par, n, target)?));
            }
            let limit = match target {
                Target::F => limit_vk_2d(&par, 0)?,
                Target::C => limit_vck_2d(&par, 0)?,
            };
            row.push(fmt_float(limit));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// `V̄_0` and `-V̄ᶜ_0` for each `M` of `cfg.m_list`, and the `M → ∞` cubics.
pub fn write_m_curves(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let mut header = vec!["p".to_string()];
    header.extend(cfg.m_list.iter().map(|m| format!("V0_M{m}")));
    header.push("V0_Minf".into());
    header.extend(cfg.m_list.iter().map(|m| format!("negVc0_M{m}")));
    header.push("negVc0_Minf".into());
    writeln!(out, "{}", header.join(","))?;
    for p in cfg.p_values()? {
        let mut row = vec![fmt_float(p)];
        for &m in &cfg.m_list {
            row.push(fmt_float(limit_vk_2d(&ModelParams::new(m, p, 2)?, 0)?));
        }
        row.push(fmt_float(large_m_v(&p)));
        for &m in &cfg.m_list {
            row.push(fmt_float(-limit_vck_2d(&ModelParams::new(m, p, 2)?, 0)?));
        }
        row.push(fmt_float(large_m_vc(&p)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Writes `levels.csv` and `limits.csv` into the output directory, or both tables to stdout.
pub fn cmd_curves(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match &cfg.output {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let (levels, limits) = (dir.join("levels.csv"), dir.join("limits.csv"));
            write_level_curves(cfg, &mut *sink(Some(&levels))?)?;
            write_m_curves(cfg, &mut *sink(Some(&limits))?)?;
            Ok(vec![levels, limits])
        }
        None => {
            let mut out = sink(None)?;
            write_level_curves(cfg, &mut *out)?;
            writeln!(out)?;
            write_m_curves(cfg, &mut *out)?;
            out.flush()?;
            Ok(Vec::new())
        }
    }
}

fn sampler(cfg: &RunConfig) -> Sampler {
    Sampler { budget_bytes: DEFAULT_BUDGET_BYTES, coupling: cfg.coupling }
}

fn template(cfg: &RunConfig, seed: u64) -> Result<Experiment> {
    let p = cfg.p_values()?[0];
    Ok(Experiment {
        functionals: cfg.functionals.clone(),
        targets: cfg.targets.clone(),
        connectivity: cfg.connectivity,
        sampler: sampler(cfg),
        shards: cfg.shards,
        ..Experiment::new(cfg.model(p)?, cfg.levels[0], cfg.samples, seed)
    })
}

pub fn protocol(cfg: &RunConfig) -> Result<Protocol> {
    Ok(match cfg.protocol {
        ProtocolKind::Custom => Protocol {
            m: cfg.m,
            levels: cfg.levels.clone(),
            p_values: cfg.p_values()?,
            schedule: SampleSchedule::uniform(cfg.samples),
        },
        ProtocolKind::Desk => Protocol::desk(cfg.m)?,
        ProtocolKind::Full => Protocol::full(cfg.m)?,
    })
}

pub fn cmd_simulate(cfg: &RunConfig, seed: u64) -> Result<Vec<PathBuf>> {
    let rows = run_protocol(&protocol(cfg)?, &template(cfg, seed)?)?;
    let mut out = sink(cfg.output.as_deref())?;
    write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(cfg.output.iter().cloned().collect())
}

#[derive(Serialize)]
struct ThresholdRow {
    #[serde(flatten)]
    report: fracperc::thresholds::ThresholdReport,
    mc_crossing: Option<ZeroCrossing>,
}

pub fn cmd_thresholds(cfg: &RunConfig, seed: u64) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    for &m in &cfg.m_list {
        let report = threshold_report(m)?;
        let mc_crossing = if cfg.bootstrap > 0 {
            let protocol = Protocol {
                m,
                levels: vec![cfg.levels[0]],
                p_values: cfg.p_values()?,
                schedule: SampleSchedule::uniform(cfg.samples),
            };
            let exp = Experiment {
                functionals: vec![Functional::V0],
                targets: vec![Target::F],
                sampler: sampler(cfg),
                shards: cfg.shards,
                ..Experiment::new(ModelParams::new(m, 0.5, 2)?, cfg.levels[0], cfg.samples, seed)
            };
            let points: Vec<(f64, f64, f64)> = run_protocol(&protocol, &exp)?
                .iter()
                .map(|r| (r.p, r.estimate.mean, r.estimate.stderr()))
                .collect();
            mc_zero_crossing(&points, cfg.bootstrap, 0.95, seed)
        } else {
            None
        };
        rows.push(ThresholdRow { report, mc_crossing });
    }
    let mut out = sink(cfg.output.as_deref())?;
    match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv => {
            writeln!(
                out,
                "M,p0,p0_residual,pmin,vbar0_at_pmin,p1,p1_residual,pc_lower,pc_upper,mc_p0,mc_p0_lower,mc_p0_upper"
            )?;
            for r in &rows {
                let t = &r.report;
                let (lo, hi) = t.known_bounds.map_or((String::new(), String::new()), |(a, b)| (fmt_float(a), fmt_float(b)));
                let mc = r.mc_crossing.map_or([String::new(), String::new(), String::new()], |z| {
                    [fmt_float(z.estimate), fmt_float(z.lower), fmt_float(z.upper)]
                });
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{lo},{hi},{}",
                    t.m,
                    fmt_float(t.p0.value),
                    fmt_float(t.p0.residual),
                    fmt_float(t.pmin.value),
                    fmt_float(t.pmin.minimum),
                    fmt_float(t.p1.value),
                    fmt_float(t.p1.residual),
                    mc.join(",")
                )?;
            }
        }
    }
    out.flush()?;
    Ok(cfg.output.iter().cloned().collect())
}

/// Raised when `verify` finds a failing check (exit code 3).
#[derive(Debug)]
pub struct VerificationFailed(pub usize);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed in {} group(s)", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

pub fn write_verify_report(cfg: &RunConfig, report: &VerifyReport) -> Result<()> {
    let mut out = sink(cfg.output.as_deref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(report)?)?;
    out.flush()?;
    let failed = report.groups.iter().filter(|g| !g.passed).count();
    if failed > 0 {
        bail!(VerificationFailed(failed));
    }
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig, seed: u64) -> Result<Vec<PathBuf>> {
    write_verify_report(cfg, &verify(&Analytic, &cfg.groups, seed))?;
    Ok(cfg.output.iter().cloned().collect())
}

pub fn cmd_render(cfg: &RunConfig, seed: u64) -> Result<Vec<PathBuf>> {
    let params = cfg.model(cfg.p_f64().expect("validated"))?;
    let mut real = sampler(cfg).sample(&params, cfg.levels[0], seed, cfg.index)?;
    if cfg.target == Target::C {
        real = complement(&real);
    }
    let mut out = sink(cfg.output.as_deref())?;
    real.grid.write_pbm(&mut out)?;
    out.flush()?;
    let mut written: Vec<PathBuf> = cfg.output.iter().cloned().collect();
    if let Some(mask_path) = &cfg.mask {
        let mask = label(&real.grid, cfg.connectivity).spanning_mask(Some(Axis::Horizontal));
        let mut out = sink(Some(mask_path))?;
        mask.write_pbm(&mut out)?;
        out.flush()?;
        written.push(mask_path.clone());
    }
    Ok(written)
}

/// Exhaustive expectation next to the closed form, both as exact rationals.
pub fn cmd_oracle(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = cfg.p.clone().expect("validated");
    let (m, n, k, target) = (cfg.m, cfg.levels[0], cfg.k, cfg.target);
    let oracle = match cfg.dim {
        1 => {
            let set = if target == Target::F { Set1D::K } else { Set1D::D };
            let quantity = if k == 0 { Quantity1D::V0 } else { Quantity1D::V1 };
            enumerate_1d(m, &p, n, set, quantity)?
        }
        _ => enumerate_2d(m, &p, n, k, target)?,
    };
    let analytic = ev_vk(&ExactParams::new(m, p.clone(), cfg.dim)?, n, k, target)?;
    let mut out = sink(cfg.output.as_deref())?;
    writeln!(out, "M,d,p,n,k,target,oracle,analytic,oracle_f64,equal")?;
    writeln!(
        out,
        "{m},{},{p},{n},{k},{target},{oracle},{analytic},{},{}",
        cfg.dim,
        fmt_float(oracle.to_f64()),
        oracle == analytic
    )?;
    out.flush()?;
    Ok(cfg.output.iter().cloned().collect())
}
