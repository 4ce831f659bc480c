//! Reconstruction of images on a regular grid from samples available only at
//! a non-regular subset of pixel positions.
//!
//! The main algorithm is block-wise frequency selective reconstruction (FSR):
//! each block is modelled together with its neighbourhood as a sparse sum of
//! Fourier basis functions, chosen greedily under a spatial weighting and a
//! frequency prior. Two priors are provided, a fixed OTF-shaped prior and an
//! adaptive prior driven by the local density of available samples.
//!
//! ```
//! use fsr_core::{generate_mask, reconstruct_image, FsrParams, ImageGrid};
//!
//! let image = ImageGrid::from_fn(16, 16, |r, c| (r * 8 + c * 4) as f64).unwrap();
//! let mask = generate_mask(16, 16, 0.4, 1).unwrap();
//! let params = FsrParams { iterations: 20, ..Default::default() };
//! let out = reconstruct_image(&image, &mask, &params).unwrap();
//! assert_eq!(out.width(), 16);
//! ```

pub mod baselines;
mod error;
pub mod fsr;
pub mod grid;
pub mod io;
mod params;
pub mod pipeline;
pub mod priors;
pub mod spectrum;
pub mod weighting;

pub use error::{FsrError, Result};
pub use fsr::{reconstruct_block, reconstruct_image, reconstruct_image_with_stats, ModelState};
pub use grid::{
    build_block_context, generate_mask, AreaLabel, BlockContext, BlockPos, ImageGrid, SamplingMask,
};
pub use params::{FsrParams, PriorKind};
pub use pipeline::{psnr, ExperimentConfig, Method, RunRecord, RunReport};
pub use priors::PriorMap;
pub use weighting::WeightMap;
