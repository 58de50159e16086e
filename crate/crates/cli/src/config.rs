//! Search settings from flags, a config file and the environment.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bikoeff::oracle::SearchConfig;
use clap::Args;
use serde::Deserialize;

pub const SEED_ENV: &str = "BIKOEFF_SEED";

#[derive(Debug, Clone, Default, Args)]
pub struct SearchArgs {
    /// Base seed for the sampler.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of sampled measures.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Refinement sweeps per start.
    #[arg(long)]
    pub refine_steps: Option<usize>,
    /// Refined starts per block of samples.
    #[arg(long)]
    pub starts: Option<usize>,
    /// Most atoms per sampled measure.
    #[arg(long)]
    pub max_atoms: Option<usize>,
    #[arg(long)]
    pub tol_feasible: Option<f64>,
    #[arg(long)]
    pub tol_violation: Option<f64>,
    /// Sample conjugate-symmetric measures only.
    #[arg(long)]
    pub restrict_real: bool,
    /// File of `key = value` lines; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    samples: Option<usize>,
    refine_steps: Option<usize>,
    starts: Option<usize>,
    max_atoms: Option<usize>,
    tol_feasible: Option<f64>,
    tol_violation: Option<f64>,
    restrict_real: Option<bool>,
}

fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
}

impl SearchArgs {
    /// Flag, then config file, then `BIKOEFF_SEED` for the seed, then `base`.
    pub fn resolve(&self, base: SearchConfig, env_seed: Option<&str>) -> Result<SearchConfig> {
        let file = match &self.config {
            Some(p) => load(p)?,
            None => FileConfig::default(),
        };
        let env_seed = env_seed
            .map(|s| s.trim().parse::<u64>().with_context(|| format!("{SEED_ENV} is not a seed: '{s}'")))
            .transpose()?;
        let cfg = SearchConfig {
            seed: self.seed.or(file.seed).or(env_seed).unwrap_or(base.seed),
            samples: self.samples.or(file.samples).unwrap_or(base.samples),
            local_refine_steps: self.refine_steps.or(file.refine_steps).unwrap_or(base.local_refine_steps),
            starts: self.starts.or(file.starts).unwrap_or(base.starts),
            max_atoms: self.max_atoms.or(file.max_atoms).unwrap_or(base.max_atoms),
            tol_feasible: self.tol_feasible.or(file.tol_feasible).unwrap_or(base.tol_feasible),
            tol_violation: self.tol_violation.or(file.tol_violation).unwrap_or(base.tol_violation),
            restrict_real: self.restrict_real || file.restrict_real.unwrap_or(base.restrict_real),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
