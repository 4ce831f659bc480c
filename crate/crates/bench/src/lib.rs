//! Deterministic inputs shared by the benchmarks.

use fsr_core::grid::block_grid;
use fsr_core::{
    build_block_context, generate_mask, BlockContext, BlockPos, FsrParams, ImageGrid, SamplingMask,
};

/// Smooth gradients plus a fine periodic pattern, in the 8-bit range.
pub fn texture(width: usize, height: usize) -> ImageGrid {
    ImageGrid::from_fn(width, height, |r, c| {
        let (y, x) = (r as f64, c as f64);
        let v = 128.0
            + 70.0 * (0.09 * x + 0.03 * y).sin()
            + 35.0 * (0.31 * y).cos() * (0.17 * x).sin()
            + ((r * 29 + c * 13) % 9) as f64;
        v.clamp(0.0, 255.0)
    })
    .expect("texture dimensions are positive")
}

/// A textured image and a random mask of the given density.
pub fn subsampled(
    width: usize,
    height: usize,
    density: f64,
    seed: u64,
) -> (ImageGrid, SamplingMask) {
    let image = texture(width, height);
    let mask = generate_mask(width, height, density, seed).expect("density in [0, 1]");
    (image, mask)
}

/// Extrapolation area of a block well inside a subsampled image, as seen by
/// the first block processed there (no reconstructed neighbours yet).
pub fn interior_context(params: &FsrParams, density: f64, seed: u64) -> BlockContext {
    let side = 3 * params.area_size();
    let (image, mask) = subsampled(side, side, density, seed);
    let working = mask.apply(&image).expect("mask matches image");
    let (rows, cols) = block_grid(side, side, params.block_size);
    let pos = BlockPos {
        row: rows / 2,
        col: cols / 2,
    };
    build_block_context(&working, &mask, &vec![false; side * side], pos, params)
        .expect("valid block position")
}
