//! Run configuration with layered resolution: command-line flags override a
//! config file, which overrides defaults. The fully resolved configuration is
//! persisted beside the outputs of every command.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use hypersearch::ingest::{DatasetFormat, SplitMode};
use hypersearch::search::PruneMode;
use hypersearch::Ratio;

use crate::CliError;

pub const CONFIG_FILE: &str = "run_config.json";

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub format: Option<DatasetFormat>,
    pub mode: Option<SplitMode>,
    pub seed: Option<u64>,
    pub max_edge_size: Option<usize>,
    pub rare_size_threshold: Option<f64>,
    pub k_multiplier: Option<f64>,
    pub eps_v: Option<Ratio>,
    pub eps_e: Option<Ratio>,
    pub eps_t: Option<Ratio>,
    pub tau: Option<f64>,
    pub alpha: Option<f64>,
    pub prune_mode: Option<PruneMode>,
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Fill every unset field from `base` (file layer or previous run).
    pub fn layered_over(mut self, base: RunConfig) -> RunConfig {
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = base.$f; } )* };
        }
        fill!(
            data,
            format,
            mode,
            seed,
            max_edge_size,
            rare_size_threshold,
            k_multiplier,
            eps_v,
            eps_e,
            eps_t,
            tau,
            alpha,
            prune_mode,
            workers
        );
        self
    }

    pub fn data(&self) -> Result<&Path, CliError> {
        self.data
            .as_deref()
            .ok_or_else(|| CliError::Config("--data is required".into()))
    }

    pub fn format(&self) -> Result<DatasetFormat, CliError> {
        self.format
            .ok_or_else(|| CliError::Config("--format is required".into()))
    }

    pub fn mode(&self) -> Result<SplitMode, CliError> {
        self.mode
            .ok_or_else(|| CliError::Config("--mode is required".into()))
    }

    pub fn max_edge_size(&self) -> usize {
        self.max_edge_size.unwrap_or(10)
    }

    pub fn rare_size_threshold(&self) -> f64 {
        self.rare_size_threshold.unwrap_or(0.01)
    }

    pub fn k_multiplier(&self) -> f64 {
        self.k_multiplier.unwrap_or(1.0)
    }

    pub fn prune_mode(&self) -> PruneMode {
        self.prune_mode.unwrap_or(PruneMode::Paper)
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

/// Read a config file; `explicit` wins over `<out>/run_config.json` when both
/// are given. Returns defaults when neither exists.
pub fn load_file_layer(out: &Path, explicit: Option<&Path>) -> Result<RunConfig, CliError> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let p = out.join(CONFIG_FILE);
            if !p.is_file() {
                return Ok(RunConfig::default());
            }
            p
        }
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

pub fn persist(out: &Path, config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(out)?;
    let text = serde_json::to_string_pretty(config).map_err(hypersearch::Error::from)?;
    std::fs::write(out.join(CONFIG_FILE), text + "\n")?;
    Ok(())
}
