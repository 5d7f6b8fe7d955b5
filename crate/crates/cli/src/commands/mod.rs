//! Subcommand implementations.

pub mod figures;
pub mod models;
pub mod scaling;
pub mod ssa;
pub mod wkb;

use clap::Args;

use crate::config::{FileConfig, ModelChoice};

/// Model selection flags shared by most subcommands.
#[derive(Args, Clone, Debug)]
pub struct ModelArgs {
    /// Model name: hill or autocatalytic
    #[arg(long)]
    pub model: Option<String>,
    /// Growth rate k
    #[arg(long)]
    pub k: Option<f64>,
    /// Carrying-capacity scale C (autocatalytic)
    #[arg(long = "big-c")]
    pub c: Option<f64>,
    /// Half-saturation A (Hill)
    #[arg(long = "big-a")]
    pub a: Option<f64>,
    /// Decay rate epsilon
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl ModelArgs {
    pub fn choice(&self, file: &FileConfig, default_model: &str) -> ModelChoice {
        ModelChoice::resolve(
            self.model.as_deref(),
            self.k,
            self.c,
            self.a,
            self.epsilon,
            file,
            default_model,
        )
    }
}

/// Seed resolution: explicit flag, else config file, else generated from
/// the clock and recorded in the manifest (silent nondeterminism is not
/// an option).
pub fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> u64 {
    flag.or(file.seed).unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        nanos ^ (std::process::id() as u64) << 32
    })
}
