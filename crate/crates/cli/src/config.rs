//! Config file loading, grid specs and model construction.
//!
//! The config file is plain `key = value` lines (`#` starts a comment).
//! Recognized keys:
//!
//! ```text
//! model.name     = hill | autocatalytic
//! model.k        = 1.0
//! model.C        = 1.0     # autocatalytic carrying-capacity scale
//! model.A        = 1.0     # Hill half-saturation
//! model.epsilon  = 0.55
//! ssa.omega      = 500
//! ssa.replicates = 100
//! ssa.t_max      = 1e5
//! ssa.x0_fraction = 0.75
//! run.seed       = 12345
//! run.threads    = 4
//! ```
//!
//! Command-line flags always take precedence over file values.

use std::path::Path;

use ghost_core::ModelSpec;

use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub model_name: Option<String>,
    pub k: Option<f64>,
    pub c: Option<f64>,
    pub a: Option<f64>,
    pub epsilon: Option<f64>,
    pub omega: Option<u64>,
    pub replicates: Option<u32>,
    pub t_max: Option<f64>,
    pub x0_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| CliError::config(format!("{}:{}: bad {what}: {value}", path.display(), lineno + 1));
        match key {
            "model.name" => cfg.model_name = Some(value.to_string()),
            "model.k" => cfg.k = Some(value.parse().map_err(|_| bad("float"))?),
            "model.C" => cfg.c = Some(value.parse().map_err(|_| bad("float"))?),
            "model.A" => cfg.a = Some(value.parse().map_err(|_| bad("float"))?),
            "model.epsilon" => cfg.epsilon = Some(value.parse().map_err(|_| bad("float"))?),
            "ssa.omega" => cfg.omega = Some(value.parse().map_err(|_| bad("integer"))?),
            "ssa.replicates" => cfg.replicates = Some(value.parse().map_err(|_| bad("integer"))?),
            "ssa.t_max" => cfg.t_max = Some(value.parse().map_err(|_| bad("float"))?),
            "ssa.x0_fraction" => cfg.x0_fraction = Some(value.parse().map_err(|_| bad("float"))?),
            "run.seed" => cfg.seed = Some(value.parse().map_err(|_| bad("integer"))?),
            "run.threads" => cfg.threads = Some(value.parse().map_err(|_| bad("integer"))?),
            other => {
                return Err(CliError::config(format!(
                    "{}:{}: unknown key `{other}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

/// `lo:hi:COUNT[log|lin]`, e.g. `1e-5:1e-1:40log` or `-0.08:0.08:81`.
/// A bare count means linear spacing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::config(format!("grid `{s}` must be lo:hi:COUNT[log|lin]")));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::config(format!("grid `{s}`: bad lower bound")))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::config(format!("grid `{s}`: bad upper bound")))?;
        let count = parts[2];
        let (digits, log) = if let Some(d) = count.strip_suffix("log") {
            (d, true)
        } else if let Some(d) = count.strip_suffix("lin") {
            (d, false)
        } else {
            (count, false)
        };
        let n: usize = digits
            .parse()
            .map_err(|_| CliError::config(format!("grid `{s}`: bad point count")))?;
        if n == 0 {
            return Err(CliError::config(format!("grid `{s}`: empty grid")));
        }
        if !(hi > lo) {
            return Err(CliError::config(format!("grid `{s}`: needs hi > lo")));
        }
        if log && !(lo > 0.0) {
            return Err(CliError::config(format!("grid `{s}`: log spacing needs lo > 0")));
        }
        Ok(GridSpec { lo, hi, n, log })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let f = |i: usize| -> f64 {
            let s = i as f64 / (self.n - 1) as f64;
            if self.log {
                (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * s).exp()
            } else {
                self.lo + (self.hi - self.lo) * s
            }
        };
        let mut v: Vec<f64> = (0..self.n).map(f).collect();
        // pin the endpoints so grid bounds survive the round trip exactly
        v[0] = self.lo;
        let last = self.n - 1;
        v[last] = self.hi;
        v
    }
}

/// Resolved model parameters after flag/file/default precedence.
#[derive(Clone, Debug)]
pub struct ModelChoice {
    pub name: String,
    pub k: f64,
    pub c: f64,
    pub a: f64,
    pub epsilon: Option<f64>,
}

impl ModelChoice {
    pub fn resolve(
        flag_model: Option<&str>,
        flag_k: Option<f64>,
        flag_c: Option<f64>,
        flag_a: Option<f64>,
        flag_eps: Option<f64>,
        file: &FileConfig,
        default_model: &str,
    ) -> Self {
        ModelChoice {
            name: flag_model
                .map(str::to_string)
                .or_else(|| file.model_name.clone())
                .unwrap_or_else(|| default_model.to_string()),
            k: flag_k.or(file.k).unwrap_or(1.0),
            c: flag_c.or(file.c).unwrap_or(1.0),
            a: flag_a.or(file.a).unwrap_or(1.0),
            epsilon: flag_eps.or(file.epsilon),
        }
    }

    /// Build the model at the given decay rate (or the resolved epsilon,
    /// or just above criticality as a neutral placeholder).
    pub fn build(&self, eps: Option<f64>) -> Result<ModelSpec, CliError> {
        let name = self.name.to_ascii_lowercase();
        let eps_c = match name.as_str() {
            "hill" => self.k / (2.0 * self.a),
            "autocatalytic" | "autocat" => self.k * self.c / 4.0,
            other => {
                return Err(CliError::config(format!(
                    "unknown model `{other}` (expected hill or autocatalytic)"
                )))
            }
        };
        let eps = eps.or(self.epsilon).unwrap_or(eps_c * 1.01);
        if !(eps > 0.0) {
            return Err(CliError::config("epsilon must be positive"));
        }
        let model = match name.as_str() {
            "hill" => ModelSpec::hill(self.k, self.a, eps)?,
            _ => ModelSpec::autocatalytic(self.k, self.c, eps)?,
        };
        Ok(model)
    }
}

/// Worker-count resolution: flag, then GHOST_SCALER_THREADS, then the
/// machine parallelism.
pub fn resolve_threads(flag: Option<usize>, file: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("GHOST_SCALER_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .or(file)
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}
