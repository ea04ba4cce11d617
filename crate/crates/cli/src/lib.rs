//! Configuration, subcommands and run manifests of the `fracperc` binary.

pub mod commands;
pub mod config;
pub mod verify;

use std::hash::{BuildHasher, Hasher};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use fracperc::Error as CoreError;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::VerificationFailed;
use crate::config::{CommandKind, ConfigError, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

/// Environment variable overriding the worker-thread count.
pub const WORKERS_ENV: &str = "FRACPERC_WORKERS";

/// Maps an error chain onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
        if cause.is::<VerificationFailed>() {
            return EXIT_VERIFY;
        }
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::ResourceGuard(_) | CoreError::InstanceTooLarge(_) => EXIT_RESOURCE,
                CoreError::Io(_) => EXIT_FAILURE,
                _ => EXIT_CONFIG,
            };
        }
    }
    EXIT_FAILURE
}

/// Record of one run, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub seed_generated: bool,
    /// SHA-256 of the canonical config text.
    pub config_hash: String,
    pub config: String,
    pub workers: usize,
    pub started_unix: u64,
    pub elapsed_secs: f64,
    pub outputs: Vec<PathBuf>,
}

pub fn config_hash(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn fresh_seed() -> u64 {
    std::collections::hash_map::RandomState::new().build_hasher().finish()
}

/// Validates `cfg`, runs its command and writes the manifest if requested.
/// A missing seed is drawn fresh and recorded.
pub fn run(mut cfg: RunConfig) -> Result<Manifest> {
    cfg.validate()?;
    let seed_generated = cfg.command.is_randomized() && cfg.seed.is_none();
    if seed_generated {
        cfg.seed = Some(fresh_seed());
    }
    let seed = cfg.seed.unwrap_or(0);
    let text = cfg.to_text();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let outputs = match cfg.command {
        CommandKind::Curves => commands::cmd_curves(&cfg),
        CommandKind::Simulate => commands::cmd_simulate(&cfg, seed),
        CommandKind::Thresholds => commands::cmd_thresholds(&cfg, seed),
        CommandKind::Verify => commands::cmd_verify(&cfg, seed),
        CommandKind::Render => commands::cmd_render(&cfg, seed),
        CommandKind::Oracle => commands::cmd_oracle(&cfg),
    }?;
    let manifest = Manifest {
        command: cfg.command.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        seed_generated,
        config_hash: config_hash(&text),
        config: text,
        workers: rayon::current_num_threads(),
        started_unix,
        elapsed_secs: clock.elapsed().as_secs_f64(),
        outputs,
    };
    if let Some(path) = &cfg.manifest {
        let json = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(manifest)
}

/// Reads the worker override, if any.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| ConfigError(format!("{WORKERS_ENV}={v:?} is not a count")))?;
            if n == 0 {
                anyhow::bail!(ConfigError(format!("{WORKERS_ENV} must be positive")));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&anyhow::anyhow!(ConfigError("x".into()))), EXIT_CONFIG);
        assert_eq!(exit_code(&anyhow::anyhow!(VerificationFailed(1))), EXIT_VERIFY);
        assert_eq!(exit_code(&anyhow::Error::from(CoreError::ResourceGuard("big".into()))), EXIT_RESOURCE);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), EXIT_FAILURE);
    }

    #[test]
    fn hash_is_sha256_hex() {
        assert_eq!(config_hash("").len(), 64);
        assert_eq!(&config_hash("abc")[..8], "ba7816bf");
    }
}
