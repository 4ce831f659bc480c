//! Density-sweep experiments: subsample images, reconstruct them with each
//! method and report PSNR and timing.

mod config;
mod report;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::ExperimentConfig;
pub use report::{MeanRow, RunError, RunRecord, RunReport};

use crate::baselines::{linear_triangulation_fill, nearest_neighbor_fill};
use crate::error::{FsrError, Result};
use crate::fsr::{reconstruct_image_with_stats, PEAK};
use crate::grid::{generate_mask, ImageGrid, SamplingMask};
use crate::io::read_image;
use crate::params::{FsrParams, PriorKind};

/// Reconstruction method under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "FSR-AP", alias = "fsr-ap")]
    FsrAp,
    #[serde(rename = "FSR-OTF", alias = "fsr-otf")]
    FsrOtf,
    #[serde(rename = "FSR-NONE", alias = "fsr-none")]
    FsrNone,
    #[serde(rename = "LIN", alias = "lin")]
    Lin,
    #[serde(rename = "NN", alias = "nn")]
    Nn,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::FsrAp,
        Method::FsrOtf,
        Method::FsrNone,
        Method::Lin,
        Method::Nn,
    ];

    pub fn prior(self) -> Option<PriorKind> {
        match self {
            Method::FsrAp => Some(PriorKind::Adaptive),
            Method::FsrOtf => Some(PriorKind::Otf),
            Method::FsrNone => Some(PriorKind::None),
            Method::Lin | Method::Nn => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::FsrAp => "FSR-AP",
            Method::FsrOtf => "FSR-OTF",
            Method::FsrNone => "FSR-NONE",
            Method::Lin => "LIN",
            Method::Nn => "NN",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = FsrError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FsrError::param(format!("unknown method {s:?}")))
    }
}

/// Peak signal-to-noise ratio for 8-bit data; `f64::INFINITY` when the images
/// are identical.
pub fn psnr(reference: &ImageGrid, test: &ImageGrid) -> Result<f64> {
    reference.check_same_dims(test.width(), test.height())?;
    let n = reference.samples().len() as f64;
    let mse = reference
        .samples()
        .iter()
        .zip(test.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Output of one method on one subsampled image.
#[derive(Clone, Debug)]
pub struct MethodOutput {
    pub image: ImageGrid,
    pub seconds: f64,
    pub fallback_blocks: usize,
}

/// Runs `method`, timing only the reconstruction itself.
pub fn run_method(
    method: Method,
    image: &ImageGrid,
    mask: &SamplingMask,
    params: &FsrParams,
) -> Result<MethodOutput> {
    let start = Instant::now();
    let (image, fallback_blocks) = match method.prior() {
        Some(prior) => {
            let r = reconstruct_image_with_stats(image, mask, &params.with_prior(prior))?;
            (r.image, r.fallback_blocks)
        }
        None if method == Method::Lin => (linear_triangulation_fill(image, mask)?.image, 0),
        None => (nearest_neighbor_fill(image, mask)?, 0),
    };
    Ok(MethodOutput {
        image,
        seconds: start.elapsed().as_secs_f64(),
        fallback_blocks,
    })
}

/// An image already in memory, labelled for the report.
#[derive(Clone, Debug)]
pub struct NamedImage {
    pub name: String,
    pub image: ImageGrid,
}

fn run_job(
    named: &NamedImage,
    density: f64,
    seed: u64,
    methods: &[Method],
    params: &FsrParams,
) -> Vec<std::result::Result<RunRecord, RunError>> {
    let img = &named.image;
    let mask = match generate_mask(img.width(), img.height(), density, seed) {
        Ok(m) => m,
        Err(e) => {
            return vec![Err(RunError {
                image: named.name.clone(),
                message: e.to_string(),
            })]
        }
    };
    methods
        .iter()
        .map(|&method| {
            let outcome = run_method(method, img, &mask, params)
                .and_then(|out| Ok((psnr(img, &out.image)?, out)));
            match outcome {
                Ok((psnr_db, out)) => Ok(RunRecord {
                    image: named.name.clone(),
                    density,
                    seed,
                    method,
                    tau: (method == Method::FsrAp).then_some(params.tau),
                    psnr_db,
                    seconds: out.seconds,
                    fallback_blocks: out.fallback_blocks,
                }),
                Err(e) => Err(RunError {
                    image: named.name.clone(),
                    message: format!("{method} at density {density}, seed {seed}: {e}"),
                }),
            }
        })
        .collect()
}

/// Runs the sweep on in-memory images. Records come out in
/// (image, density, seed, method) order regardless of scheduling.
pub fn run_on_images(images: &[NamedImage], config: &ExperimentConfig) -> Result<RunReport> {
    config.validate_sweep()?;
    let jobs: Vec<(&NamedImage, f64, u64)> = images
        .iter()
        .flat_map(|img| {
            config
                .densities
                .iter()
                .flat_map(move |&d| config.seeds.iter().map(move |&s| (img, d, s)))
        })
        .collect();
    let run = |&(img, d, s): &(&NamedImage, f64, u64)| {
        run_job(img, d, s, &config.methods, &config.params)
    };
    let results: Vec<_> = if config.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    let mut report = RunReport::default();
    for outcome in results.into_iter().flatten() {
        match outcome {
            Ok(rec) => report.records.push(rec),
            Err(err) => report.errors.push(err),
        }
    }
    Ok(report)
}

fn load_images(config: &ExperimentConfig) -> (Vec<NamedImage>, Vec<RunError>) {
    let mut images = Vec::new();
    let mut errors = Vec::new();
    for path in &config.images {
        let name = path.display().to_string();
        match read_image(path) {
            Ok(image) => images.push(NamedImage { name, image }),
            Err(e) => errors.push(RunError {
                image: name,
                message: e.to_string(),
            }),
        }
    }
    (images, errors)
}

/// Loads every configured image and runs the sweep. Unreadable images are
/// recorded in [`RunReport::errors`] and skipped.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let (images, errors) = load_images(config);
    let mut report = run_on_images(&images, config)?;
    report.errors.splice(0..0, errors);
    Ok(report)
}

/// FSR-AP only, once per tau.
pub fn sweep_tau_on_images(
    images: &[NamedImage],
    config: &ExperimentConfig,
    taus: &[f64],
) -> Result<RunReport> {
    if taus.is_empty() {
        return Err(FsrError::param("tau sweep needs at least one tau"));
    }
    let mut report = RunReport::default();
    for &tau in taus {
        let mut cfg = config.clone();
        cfg.methods = vec![Method::FsrAp];
        cfg.params.tau = tau;
        report.extend(run_on_images(images, &cfg)?);
    }
    Ok(report)
}

pub fn sweep_tau(config: &ExperimentConfig, taus: &[f64]) -> Result<RunReport> {
    config.validate()?;
    let (images, errors) = load_images(config);
    let mut report = sweep_tau_on_images(&images, config, taus)?;
    report.errors.splice(0..0, errors);
    Ok(report)
}

/// Writes `report.csv` and `summary.csv` (and `tau_sweep.csv` when given)
/// into `dir`.
pub fn write_outputs(dir: &Path, report: &RunReport, tau_sweep: Option<&RunReport>) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| FsrError::io(dir, e))?;
    report.save_csv(dir.join("report.csv"))?;
    let summary = dir.join("summary.csv");
    let file = std::fs::File::create(&summary).map_err(|e| FsrError::io(&summary, e))?;
    report.write_summary_csv(file)?;
    if let Some(sweep) = tau_sweep {
        sweep.save_csv(dir.join("tau_sweep.csv"))?;
    }
    Ok(())
}
