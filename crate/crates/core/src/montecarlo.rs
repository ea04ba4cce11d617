//! Batch Monte Carlo estimation of the functionals of `F_n` and `C_n`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{ModelParams, Target};
use crate::error::{Error, Result};
use crate::geometry::{label, minkowski, minkowski_line, Axis, Connectivity, MinkowskiValues};
use crate::lattice::BitGrid;
use crate::sampler::Sampler;

/// Default number of contiguous sample shards. The shard plan, not the worker
/// count, fixes the floating-point reduction order.
pub const DEFAULT_SHARDS: usize = 64;

/// Largest accepted sample count; counts stay exact as `f64`.
pub const MAX_SAMPLES: u64 = 1 << 53;

/// Streaming mean and variance (Welford), mergeable with Chan's update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct McEstimate {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the mean.
    pub m2: f64,
}

impl McEstimate {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &McEstimate) -> McEstimate {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        McEstimate {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean, `sqrt(M2 / (count (count - 1)))`.
    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for McEstimate {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = McEstimate::default();
        iter.into_iter().for_each(|x| acc.push(x));
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Functional {
    V0,
    V1,
    V2,
    /// Indicator of a left-right spanning cluster.
    Spanning,
}

impl Functional {
    pub const MINKOWSKI: [Functional; 3] = [Functional::V0, Functional::V1, Functional::V2];

    pub fn order(self) -> Option<u8> {
        match self {
            Functional::V0 => Some(0),
            Functional::V1 => Some(1),
            Functional::V2 => Some(2),
            Functional::Spanning => None,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functional::V0 => "V0",
            Functional::V1 => "V1",
            Functional::V2 => "V2",
            Functional::Spanning => "span",
        })
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "v0" | "0" => Ok(Functional::V0),
            "v1" | "1" => Ok(Functional::V1),
            "v2" | "2" => Ok(Functional::V2),
            "span" | "spanning" => Ok(Functional::Spanning),
            other => Err(Error::InvalidParams(format!("unknown functional {other:?}"))),
        }
    }
}

/// Everything that determines one batch of replicates.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub params: ModelParams,
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    pub functionals: Vec<Functional>,
    pub targets: Vec<Target>,
    pub connectivity: Connectivity,
    pub sampler: Sampler,
    pub shards: usize,
}

impl Experiment {
    pub fn new(params: ModelParams, n: u32, samples: u64, seed: u64) -> Self {
        Self {
            params,
            n,
            samples,
            seed,
            functionals: Functional::MINKOWSKI.to_vec(),
            targets: vec![Target::F, Target::C],
            connectivity: Connectivity::Eight,
            sampler: Sampler::default(),
            shards: DEFAULT_SHARDS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidParams(format!("need at least 2 samples, got {}", self.samples)));
        }
        if self.samples > MAX_SAMPLES {
            return Err(Error::InvalidParams(format!("sample count {} exceeds 2^53", self.samples)));
        }
        if self.shards == 0 {
            return Err(Error::InvalidParams("shard count must be positive".into()));
        }
        for k in self.functionals.iter().filter_map(|f| f.order()) {
            if k > self.params.dim {
                return Err(Error::InvalidOrder { k, dim: self.params.dim });
            }
        }
        self.sampler.check_budget(&self.params, self.n).map(|_| ())
    }

    fn cells(&self) -> Vec<(Target, Functional)> {
        self.targets.iter().flat_map(|&t| self.functionals.iter().map(move |&f| (t, f))).collect()
    }

    fn shard_ranges(&self) -> Vec<(u64, u64)> {
        let shards = (self.shards as u64).min(self.samples);
        (0..shards)
            .map(|s| (self.samples * s / shards, self.samples * (s + 1) / shards))
            .collect()
    }
}

/// One output line: an estimate for a (functional, target) pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub m: u32,
    pub p: f64,
    pub n: u32,
    pub functional: Functional,
    pub target: Target,
    pub estimate: McEstimate,
    /// `r^{n(D-k)}` times the mean, present when `M^d p > 1`.
    pub rescaled_mean: Option<f64>,
}

fn measure(grid: &BitGrid, dim: u8, cell_size: f64) -> MinkowskiValues {
    if dim == 1 {
        minkowski_line(grid, cell_size)
    } else {
        minkowski(grid, cell_size)
    }
}

/// Samples every replicate of `exp`, shards run in parallel and merged in order.
pub fn run_experiment(exp: &Experiment) -> Result<Vec<McRow>> {
    exp.validate()?;
    let cells = exp.cells();
    let cell_size = (exp.params.m as f64).powi(-(exp.n as i32));
    let needs_f = exp.targets.contains(&Target::F);
    let needs_c = exp.targets.contains(&Target::C);

    let shard_results = exp
        .shard_ranges()
        .into_par_iter()
        .map(|(start, end)| -> Result<Vec<McEstimate>> {
            let mut acc = vec![McEstimate::default(); cells.len()];
            for idx in start..end {
                let f_grid = exp.sampler.sample(&exp.params, exp.n, exp.seed, idx)?.grid;
                let c_grid = needs_c.then(|| f_grid.inverted());
                let grids = [
                    (Target::F, needs_f.then_some(&f_grid)),
                    (Target::C, c_grid.as_ref()),
                ];
                for (target, grid) in grids {
                    let Some(grid) = grid else { continue };
                    let values = measure(grid, exp.params.dim, cell_size);
                    for (slot, &(t, f)) in acc.iter_mut().zip(&cells) {
                        if t != target {
                            continue;
                        }
                        let x = match f.order() {
                            Some(k) => values.vk(k),
                            None => label(grid, exp.connectivity).spans(Axis::Horizontal) as u8 as f64,
                        };
                        slot.push(x);
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let merged = shard_results.iter().fold(vec![McEstimate::default(); cells.len()], |total, shard| {
        total.iter().zip(shard).map(|(a, b)| a.merge(b)).collect()
    });

    cells
        .iter()
        .zip(merged)
        .map(|(&(target, functional), estimate)| {
            let rescaled_mean = match functional.order() {
                Some(k) if exp.params.non_empty_regime() => Some(exp.params.rescale(exp.n, k)? * estimate.mean),
                _ => None,
            };
            Ok(McRow {
                m: exp.params.m,
                p: exp.params.p,
                n: exp.n,
                functional,
                target,
                estimate,
                rescaled_mean,
            })
        })
        .collect()
}

/// Fraction of replicates of `F_n` with a cluster touching both sides across `axis`.
pub fn spanning_probability(
    params: &ModelParams,
    n: u32,
    samples: u64,
    seed: u64,
    connectivity: Connectivity,
    axis: Axis,
) -> Result<McEstimate> {
    let exp = Experiment {
        functionals: vec![Functional::Spanning],
        targets: vec![Target::F],
        connectivity,
        ..Experiment::new(params.clone(), n, samples, seed)
    };
    exp.validate()?;
    let shards = exp
        .shard_ranges()
        .into_par_iter()
        .map(|(start, end)| {
            (start..end)
                .map(|idx| {
                    let grid = exp.sampler.sample(params, n, seed, idx)?.grid;
                    Ok(label(&grid, connectivity).spans(axis) as u8 as f64)
                })
                .collect::<Result<McEstimate>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(shards.iter().fold(McEstimate::default(), |a, b| a.merge(b)))
}

/// Sample count for one region of the `(M, p, target)` space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleOverride {
    pub m: Option<u32>,
    pub target: Option<Target>,
    /// Inclusive `p` range.
    pub p_range: (f64, f64),
    pub samples: u64,
}

/// Default sample count plus region overrides; the first matching override wins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSchedule {
    pub default: u64,
    pub overrides: Vec<SampleOverride>,
}

impl SampleSchedule {
    pub fn uniform(samples: u64) -> Self {
        Self { default: samples, overrides: Vec::new() }
    }

    pub fn samples_for(&self, m: u32, p: f64, target: Target) -> u64 {
        self.overrides
            .iter()
            .find(|o| {
                o.m.is_none_or(|om| om == m)
                    && o.target.is_none_or(|ot| ot == target)
                    && (o.p_range.0..=o.p_range.1).contains(&p)
            })
            .map_or(self.default, |o| o.samples)
    }
}

/// Inclusive arithmetic grid `start, start + step, ..., ≤ stop`, rounded to 12 decimals.
pub fn p_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    let valid = step > 0.0 && start <= stop && start.is_finite() && stop.is_finite();
    if !valid {
        return Err(Error::InvalidParams(format!("bad p-grid {start}..{stop} step {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// A family of experiments over a p-grid and several levels for one `M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Protocol {
    pub m: u32,
    pub levels: Vec<u32>,
    pub p_values: Vec<f64>,
    pub schedule: SampleSchedule,
}

impl Protocol {
    /// Minutes-scale default: 2000 samples, the largest `n` with `M^n ≤ 4096`, step 0.02.
    pub fn desk(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("M must be at least 2, got {m}")));
        }
        let n = (1..).take_while(|&n| (m as u64).pow(n) <= 4096).last().unwrap_or(1);
        Ok(Self { m, levels: vec![n], p_values: p_grid(0.11, 0.99, 0.02)?, schedule: SampleSchedule::uniform(2000) })
    }

    /// The published study for `M ∈ {2, 3, 4}`: levels `32/2^M + {0, 2, 4}`,
    /// 75000, 5000 or 2500 samples, tenfold samples on `F_n` for `M = 2, p ≤ 0.31`.
    pub fn full(m: u32) -> Result<Self> {
        let samples = match m {
            2 => 75_000,
            3 => 5_000,
            4 => 2_500,
            _ => return Err(Error::InvalidParams(format!("the full protocol covers M = 2, 3, 4, got {m}"))),
        };
        let base = 32 / 2u32.pow(m);
        let overrides = if m == 2 {
            vec![SampleOverride { m: Some(2), target: Some(Target::F), p_range: (0.0, 0.31), samples: samples * 10 }]
        } else {
            Vec::new()
        };
        Ok(Self {
            m,
            levels: vec![base, base + 2, base + 4],
            p_values: p_grid(0.11, 0.99, 0.02)?,
            schedule: SampleSchedule { default: samples, overrides },
        })
    }
}

/// Runs `template` at every `(n, p, target)` of `protocol`, overriding its `M`, `p`, `n`,
/// `samples` and `targets`. The seed is shared, so with shared coupling the curves are monotone
/// couplings of one another.
pub fn run_protocol(protocol: &Protocol, template: &Experiment) -> Result<Vec<McRow>> {
    let mut rows = Vec::new();
    for &n in &protocol.levels {
        for &p in &protocol.p_values {
            let params = ModelParams::new(protocol.m, p, template.params.dim)?;
            for &target in &template.targets {
                let exp = Experiment {
                    params: params.clone(),
                    n,
                    samples: protocol.schedule.samples_for(protocol.m, p, target),
                    targets: vec![target],
                    ..template.clone()
                };
                rows.extend(run_experiment(&exp)?);
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "M,p,n,functional,target,mean,stderr,count,rescaled_mean";

/// Formats a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[McRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.m,
            fmt_float(r.p),
            r.n,
            r.functional,
            r.target,
            fmt_float(r.estimate.mean),
            fmt_float(r.estimate.stderr()),
            r.estimate.count,
            r.rescaled_mean.map(fmt_float).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs: Vec<f64> = (0..101).map(|i| ((i * 37) % 11) as f64 - 3.5).collect();
        let acc: McEstimate = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((acc.mean - mean).abs() < 1e-13);
        assert!((acc.variance() - var).abs() < 1e-12);
        let (a, b) = xs.split_at(40);
        let merged = a.iter().copied().collect::<McEstimate>().merge(&b.iter().copied().collect());
        assert_eq!(merged.count, 101);
        assert!((merged.mean - mean).abs() < 1e-13);
        assert!((merged.m2 - acc.m2).abs() < 1e-10);
    }

    #[test]
    fn merge_with_empty() {
        let a: McEstimate = [1.0, 2.0].into_iter().collect();
        assert_eq!(a.merge(&McEstimate::default()), a);
        assert_eq!(McEstimate::default().merge(&a), a);
    }

    #[test]
    fn full_cube_has_zero_variance() {
        let exp = Experiment::new(ModelParams::new(2, 1.0, 2).unwrap(), 3, 20, 5);
        let rows = run_experiment(&exp).unwrap();
        let v0f = rows.iter().find(|r| r.functional == Functional::V0 && r.target == Target::F).unwrap();
        assert_eq!(v0f.estimate.mean, 1.0);
        assert_eq!(v0f.estimate.m2, 0.0);
        let v2c = rows.iter().find(|r| r.functional == Functional::V2 && r.target == Target::C).unwrap();
        assert_eq!(v2c.estimate.mean, 0.0);
    }

    #[test]
    fn rejects_bad_requests() {
        let params = ModelParams::new(2, 0.5, 1).unwrap();
        assert!(run_experiment(&Experiment::new(params.clone(), 3, 1, 0)).is_err());
        assert!(matches!(run_experiment(&Experiment::new(params, 3, 10, 0)), Err(Error::InvalidOrder { .. })));
        let huge = Experiment::new(ModelParams::new(2, 0.5, 2).unwrap(), 20, 10, 0);
        assert!(matches!(run_experiment(&huge), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn spanning_extremes() {
        for (p, expect) in [(1.0, 1.0), (0.0, 0.0)] {
            let params = ModelParams::new(3, p, 2).unwrap();
            let est = spanning_probability(&params, 2, 10, 1, Connectivity::Four, Axis::Horizontal).unwrap();
            assert_eq!(est.mean, expect);
        }
    }

    #[test]
    fn schedules_and_protocols() {
        let full = Protocol::full(2).unwrap();
        assert_eq!(full.levels, vec![8, 10, 12]);
        assert_eq!(full.p_values.len(), 45);
        assert_eq!(full.p_values[1], 0.13);
        assert_eq!(*full.p_values.last().unwrap(), 0.99);
        assert_eq!(full.schedule.samples_for(2, 0.31, Target::F), 750_000);
        assert_eq!(full.schedule.samples_for(2, 0.31, Target::C), 75_000);
        assert_eq!(full.schedule.samples_for(2, 0.33, Target::F), 75_000);
        assert_eq!(Protocol::full(4).unwrap().levels, vec![2, 4, 6]);
        assert_eq!(Protocol::desk(2).unwrap().levels, vec![12]);
        assert_eq!(Protocol::desk(3).unwrap().levels, vec![7]);
        assert!(Protocol::full(5).is_err());
    }

    #[test]
    fn csv_layout() {
        let exp = Experiment { functionals: vec![Functional::V2], targets: vec![Target::F], ..Experiment::new(ModelParams::new(2, 0.5, 2).unwrap(), 2, 4, 1) };
        let mut buf = Vec::new();
        write_csv(&run_experiment(&exp).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[1], "5.0000000000000000e-1");
        assert_eq!(fields[1].parse::<f64>().unwrap(), 0.5);
        assert_eq!(fields[7], "4");
        assert!(!fields[8].is_empty());
    }
}
