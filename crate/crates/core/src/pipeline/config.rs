use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Method;
use crate::error::{FsrError, Result};
use crate::params::FsrParams;

fn default_parallel() -> bool {
    true
}

/// One density sweep: every image is subsampled at every density with every
/// seed, and each method reconstructs the result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub images: Vec<PathBuf>,
    pub densities: Vec<f64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    /// Shared FSR tunables; the prior kind is set per method.
    #[serde(default)]
    pub params: FsrParams,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// When non-empty, `bench` additionally sweeps the adaptive prior's tau.
    #[serde(default)]
    pub taus: Vec<f64>,
    /// Run independent (image, density, seed) jobs on the rayon pool.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(
        images: Vec<PathBuf>,
        densities: Vec<f64>,
        seeds: Vec<u64>,
        methods: Vec<Method>,
    ) -> Self {
        ExperimentConfig {
            images,
            densities,
            seeds,
            methods,
            params: FsrParams::default(),
            output_dir: None,
            taus: Vec::new(),
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.is_empty() {
            return Err(FsrError::param("experiment needs at least one image"));
        }
        self.validate_sweep()
    }

    /// Checks everything except the image list, for sweeps over images that
    /// are already in memory.
    pub fn validate_sweep(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(FsrError::param("experiment needs at least one method"));
        }
        if self.seeds.is_empty() {
            return Err(FsrError::param("experiment needs at least one seed"));
        }
        if self.densities.is_empty() {
            return Err(FsrError::param("experiment needs at least one density"));
        }
        if let Some(d) = self.densities.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return Err(FsrError::param(format!("density {d} outside (0, 1]")));
        }
        if let Some(t) = self.taus.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
            return Err(FsrError::param(format!("tau {t} must be positive")));
        }
        self.params.validate()
    }

    /// Parses JSON (when the text starts with `{`) or flat `key = value`
    /// lines. Lists are comma separated; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let config = if text.trim_start().starts_with('{') {
            serde_json::from_str(text)?
        } else {
            parse_key_values(text)?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| FsrError::io(path, e))?;
        Self::parse(&text)
    }
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| FsrError::param(format!("invalid entry {s:?} for {key}")))
        })
        .collect()
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| FsrError::param(format!("invalid value {value:?} for {key}")))
}

fn parse_key_values(text: &str) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::new(Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| FsrError::param(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let p = &mut config.params;
        match key {
            "images" | "image" => config.images.extend(list::<PathBuf>(key, value)?),
            "densities" | "density" => config.densities = list(key, value)?,
            "seeds" | "seed" => config.seeds = list(key, value)?,
            "methods" | "method" => config.methods = list(key, value)?,
            "taus" => config.taus = list(key, value)?,
            "output_dir" | "output" | "out" => config.output_dir = Some(PathBuf::from(value)),
            "parallel" => config.parallel = scalar(key, value)?,
            "rho" | "rho_hat" => p.rho_hat = scalar(key, value)?,
            "delta" => p.delta = scalar(key, value)?,
            "gamma" => p.gamma = scalar(key, value)?,
            "tau" => p.tau = scalar(key, value)?,
            "block" | "block_size" => p.block_size = scalar(key, value)?,
            "border" => p.border = scalar(key, value)?,
            "iters" | "iterations" => p.iterations = scalar(key, value)?,
            "alpha_max" => p.alpha_max = scalar(key, value)?,
            other => {
                return Err(FsrError::param(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(config)
}
