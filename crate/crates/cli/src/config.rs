//! Run configuration with a line-oriented `key = value` text form.
//!
//! Values are layered: defaults, then a config file, then command-line flags.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use fracperc::analytic::{limit_vck_2d, limit_vk_2d, ModelParams, Target};
use fracperc::geometry::Connectivity;
use fracperc::montecarlo::{p_grid, Functional};
use fracperc::sampler::Coupling;
use fracperc::scalar::parse_exact;
use fracperc::{Exact, Scalar};
use num_traits::{One, Zero};

/// Marks an error as a configuration problem (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(ConfigError(msg.into()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CommandKind {
    #[default]
    Curves,
    Simulate,
    Thresholds,
    Verify,
    Render,
    Oracle,
}

impl CommandKind {
    const NAMES: [(&'static str, CommandKind); 6] = [
        ("curves", CommandKind::Curves),
        ("simulate", CommandKind::Simulate),
        ("thresholds", CommandKind::Thresholds),
        ("verify", CommandKind::Verify),
        ("render", CommandKind::Render),
        ("oracle", CommandKind::Oracle),
    ];

    pub fn is_randomized(self) -> bool {
        matches!(self, CommandKind::Simulate | CommandKind::Render | CommandKind::Verify | CommandKind::Thresholds)
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Self::NAMES.iter().find(|(_, c)| c == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

impl FromStr for CommandKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES.iter().find(|(n, _)| *n == s).map(|(_, c)| *c).ok_or_else(|| anyhow!("unknown command {s:?}"))
    }
}

/// Which sample/level/p-grid plan `simulate` uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProtocolKind {
    /// The configured `levels`, p-grid and `samples`.
    #[default]
    Custom,
    Desk,
    /// The published study; hours of runtime.
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Check groups run by `verify`.
pub const VERIFY_GROUPS: [&str; 5] = ["oracle", "limits", "geometry", "thresholds", "montecarlo"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub m: u32,
    pub m_list: Vec<u32>,
    pub dim: u8,
    /// Single survival probability; when set it replaces the p-grid.
    pub p: Option<Exact>,
    pub p_start: f64,
    pub p_stop: f64,
    pub p_step: f64,
    pub levels: Vec<u32>,
    pub k: u8,
    pub target: Target,
    pub targets: Vec<Target>,
    pub functionals: Vec<Functional>,
    pub samples: u64,
    pub seed: Option<u64>,
    pub index: u64,
    pub connectivity: Connectivity,
    pub coupling: Coupling,
    pub shards: usize,
    pub protocol: ProtocolKind,
    pub groups: Vec<String>,
    /// Bootstrap resamples for the Monte Carlo zero-crossing diagnostic; 0 disables it.
    pub bootstrap: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub mask: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::default(),
            m: 2,
            m_list: vec![2, 3, 4, 8, 16, 1024],
            dim: 2,
            p: None,
            p_start: 0.27,
            p_stop: 0.99,
            p_step: 0.02,
            levels: vec![8],
            k: 0,
            target: Target::F,
            targets: vec![Target::F, Target::C],
            functionals: Functional::MINKOWSKI.to_vec(),
            samples: 2000,
            seed: None,
            index: 0,
            connectivity: Connectivity::Eight,
            coupling: Coupling::Shared,
            shards: fracperc::montecarlo::DEFAULT_SHARDS,
            protocol: ProtocolKind::Custom,
            groups: VERIFY_GROUPS.iter().map(|g| g.to_string()).collect(),
            bootstrap: 0,
            format: Format::Csv,
            output: None,
            manifest: None,
            mask: None,
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn split<T>(value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse).collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| config_err(format!("{key}: cannot parse {value:?}: {e}")))
}

impl RunConfig {
    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let key = key.trim().replace('-', "_");
        let bad = |what: &str| config_err(format!("{key}: {what} {value:?}"));
        match key.as_str() {
            "command" => self.command = value.parse().map_err(|_| bad("unknown command"))?,
            "m" => self.m = number(&key, value)?,
            "m_list" => self.m_list = split(value, |s| number(&key, s))?,
            "dim" | "d" => self.dim = number(&key, value)?,
            "p" => {
                self.p = if value.is_empty() {
                    None
                } else {
                    Some(parse_exact(value).ok_or_else(|| bad("not a number or fraction"))?)
                }
            }
            "p_start" => self.p_start = number(&key, value)?,
            "p_stop" => self.p_stop = number(&key, value)?,
            "p_step" => self.p_step = number(&key, value)?,
            "levels" | "n" => self.levels = split(value, |s| number(&key, s))?,
            "k" => self.k = number(&key, value)?,
            "target" => self.target = value.parse().map_err(|_| bad("unknown target"))?,
            "targets" => self.targets = split(value, |s| s.parse::<Target>().map_err(|_| bad("unknown target")))?,
            "functionals" => {
                self.functionals = split(value, |s| s.parse::<Functional>().map_err(|_| bad("unknown functional")))?
            }
            "samples" => self.samples = number(&key, value)?,
            "seed" => self.seed = if value.is_empty() { None } else { Some(number(&key, value)?) },
            "index" => self.index = number(&key, value)?,
            "connectivity" => {
                self.connectivity = Connectivity::from_number(number(&key, value)?).ok_or_else(|| bad("expected 4 or 8"))?
            }
            "coupling" => {
                self.coupling = match value {
                    "shared" => Coupling::Shared,
                    "independent" => Coupling::Independent,
                    _ => return Err(bad("expected shared or independent")),
                }
            }
            "shards" => self.shards = number(&key, value)?,
            "protocol" => {
                self.protocol = match value {
                    "custom" => ProtocolKind::Custom,
                    "desk" => ProtocolKind::Desk,
                    "full" => ProtocolKind::Full,
                    _ => return Err(bad("expected custom, desk or full")),
                }
            }
            "groups" => {
                self.groups = split(value, |s| {
                    VERIFY_GROUPS.contains(&s).then(|| s.to_string()).ok_or_else(|| bad("unknown group"))
                })?
            }
            "bootstrap" => self.bootstrap = number(&key, value)?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(bad("expected csv or json")),
                }
            }
            "output" => self.output = (!value.is_empty()).then(|| PathBuf::from(value)),
            "manifest" => self.manifest = (!value.is_empty()).then(|| PathBuf::from(value)),
            "mask" => self.mask = (!value.is_empty()).then(|| PathBuf::from(value)),
            _ => return Err(config_err(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| config_err(format!("line {}: expected key = value", no + 1)))?;
            self.set(key, value).with_context(|| format!("line {}", no + 1))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Canonical text form; `from_text(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("write to string");
        put("command", self.command.to_string());
        put("m", self.m.to_string());
        put("m_list", join(&self.m_list));
        put("dim", self.dim.to_string());
        if let Some(p) = &self.p {
            put("p", p.to_string());
        }
        put("p_start", self.p_start.to_string());
        put("p_stop", self.p_stop.to_string());
        put("p_step", self.p_step.to_string());
        put("levels", join(&self.levels));
        put("k", self.k.to_string());
        put("target", self.target.to_string());
        put("targets", join(&self.targets));
        put("functionals", join(&self.functionals));
        put("samples", self.samples.to_string());
        if let Some(seed) = self.seed {
            put("seed", seed.to_string());
        }
        put("index", self.index.to_string());
        put("connectivity", self.connectivity.number().to_string());
        put(
            "coupling",
            match self.coupling {
                Coupling::Shared => "shared",
                Coupling::Independent => "independent",
            }
            .into(),
        );
        put("shards", self.shards.to_string());
        put(
            "protocol",
            match self.protocol {
                ProtocolKind::Custom => "custom",
                ProtocolKind::Desk => "desk",
                ProtocolKind::Full => "full",
            }
            .into(),
        );
        put("groups", self.groups.join(","));
        put("bootstrap", self.bootstrap.to_string());
        put(
            "format",
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .into(),
        );
        for (key, path) in [("output", &self.output), ("manifest", &self.manifest), ("mask", &self.mask)] {
            if let Some(path) = path {
                put(key, path.display().to_string());
            }
        }
        out
    }

    pub fn p_f64(&self) -> Option<f64> {
        self.p.as_ref().map(Scalar::to_f64)
    }

    /// The single `p` if set, otherwise the p-grid.
    pub fn p_values(&self) -> Result<Vec<f64>> {
        match self.p_f64() {
            Some(p) => Ok(vec![p]),
            None => p_grid(self.p_start, self.p_stop, self.p_step).map_err(|e| config_err(e.to_string())),
        }
    }

    pub fn model(&self, p: f64) -> Result<ModelParams> {
        ModelParams::new(self.m, p, self.dim).map_err(|e| config_err(e.to_string()))
    }

    /// Domain checks that can be decided before any work is done.
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.m_list.iter().any(|&m| m < 2) {
            bail!(ConfigError("M must be at least 2".into()));
        }
        if !(self.dim == 1 || self.dim == 2) {
            bail!(ConfigError(format!("dim must be 1 or 2, got {}", self.dim)));
        }
        if self.k > self.dim {
            bail!(ConfigError(format!("k={} exceeds dim={}", self.k, self.dim)));
        }
        if let Some(p) = &self.p {
            if *p < Exact::zero() || *p > Exact::one() {
                bail!(ConfigError(format!("p={p} outside [0, 1]")));
            }
        }
        let ps = self.p_values()?;
        if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
            bail!(ConfigError("p-grid leaves [0, 1]".into()));
        }
        if self.levels.is_empty() {
            bail!(ConfigError("levels must not be empty".into()));
        }
        if self.shards == 0 {
            bail!(ConfigError("shards must be positive".into()));
        }
        match self.command {
            CommandKind::Curves => {
                if self.dim != 2 {
                    bail!(ConfigError("curves are planar; set dim = 2".into()));
                }
                let ms = std::iter::once(self.m).chain(self.m_list.iter().copied());
                for m in ms {
                    for &p in &ps {
                        let par = ModelParams::new(m, p, 2).map_err(|e| config_err(e.to_string()))?;
                        limit_vk_2d(&par, 0).map_err(|e| config_err(e.to_string()))?;
                        limit_vck_2d(&par, 0).map_err(|e| config_err(e.to_string()))?;
                    }
                }
            }
            CommandKind::Simulate => {
                if self.samples < 2 {
                    bail!(ConfigError(format!("samples must be at least 2, got {}", self.samples)));
                }
                if self.functionals.iter().filter_map(|f| f.order()).any(|k| k > self.dim) {
                    bail!(ConfigError(format!("functional order exceeds dim={}", self.dim)));
                }
                if self.protocol == ProtocolKind::Full && !(2..=4).contains(&self.m) {
                    bail!(ConfigError("the full protocol is defined for M = 2, 3, 4".into()));
                }
            }
            CommandKind::Thresholds if self.bootstrap > 0 && self.samples < 2 => {
                bail!(ConfigError("the bootstrap diagnostic needs samples >= 2".into()));
            }
            CommandKind::Render | CommandKind::Oracle if self.p.is_none() => {
                bail!(ConfigError(format!("{} needs a single p", self.command)));
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn keys_and_comments() {
        let cfg = RunConfig::from_text("# comment\nm = 3\n\np = 1/5\nlevels = 2, 4\nconnectivity=4\n").unwrap();
        assert_eq!(cfg.m, 3);
        assert_eq!(cfg.p, Some(Exact::ratio(1, 5)));
        assert_eq!(cfg.levels, vec![2, 4]);
        assert_eq!(cfg.connectivity, Connectivity::Four);
    }

    #[test]
    fn decimal_p_is_exact() {
        let mut cfg = RunConfig::default();
        cfg.set("p", "0.2").unwrap();
        assert_eq!(cfg.p, Some(Exact::ratio(1, 5)));
    }

    #[test]
    fn errors_are_config_errors() {
        for text in ["m = two", "bogus = 1", "connectivity = 6", "no equals sign"] {
            let err = RunConfig::from_text(text).unwrap_err();
            assert!(err.chain().any(|e| e.is::<ConfigError>()), "{text}");
        }
    }

    #[test]
    fn limit_curves_reject_subcritical_p() {
        let mut cfg = RunConfig { command: CommandKind::Curves, m_list: vec![2], ..RunConfig::default() };
        cfg.p_start = 0.2;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("p > 1/M^2") || err.to_string().contains("M=2"), "{err}");
        cfg.p_start = 0.27;
        cfg.validate().unwrap();
    }
}
