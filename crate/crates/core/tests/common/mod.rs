#![allow(dead_code)]

use fsr_core::io::read_image;
use fsr_core::{AreaLabel, BlockContext, ImageGrid};
use rand::Rng;

pub fn crop_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/camera_crop_128.pgm")
}

/// 128x128 textured natural-image crop used by the quality checks.
pub fn crop() -> ImageGrid {
    read_image(crop_path()).expect("test crop is readable")
}

/// Top-left `width x height` window of `image`.
pub fn window(image: &ImageGrid, width: usize, height: usize) -> ImageGrid {
    ImageGrid::from_fn(width, height, |r, c| image.get(r, c)).unwrap()
}

/// Smooth-plus-noise 8-bit texture.
pub fn textured(width: usize, height: usize) -> ImageGrid {
    ImageGrid::from_fn(width, height, |r, c| {
        let (y, x) = (r as f64, c as f64);
        let v = 128.0
            + 60.0 * (0.21 * x + 0.05 * y).sin()
            + 30.0 * (0.13 * y - 0.4).cos() * (0.07 * x).sin()
            + ((r * 31 + c * 17) % 11) as f64;
        v.clamp(0.0, 255.0)
    })
    .unwrap()
}

/// Random extrapolation area: known samples at roughly `density`, some
/// reconstructed pixels, an optional strip outside the image, and at least one
/// supporting sample.
pub fn random_context<R: Rng>(
    rng: &mut R,
    block: usize,
    border: usize,
    density: f64,
) -> BlockContext {
    let size = block + 2 * border;
    let outside_rows = if rng.gen_bool(0.3) {
        rng.gen_range(0..=border)
    } else {
        0
    };
    let outside_cols = if rng.gen_bool(0.3) {
        rng.gen_range(0..=border)
    } else {
        0
    };
    let recon_share = if rng.gen_bool(0.5) {
        rng.gen_range(0.0..0.6)
    } else {
        0.0
    };
    let (fx, fy, phase) = (
        rng.gen_range(0.0..0.8),
        rng.gen_range(0.0..0.8),
        rng.gen_range(0.0..6.3),
    );
    let mut labels = Vec::with_capacity(size * size);
    let mut values = Vec::with_capacity(size * size);
    for m in 0..size {
        for n in 0..size {
            let label = if m < outside_rows || n < outside_cols {
                AreaLabel::Outside
            } else if rng.gen_bool(density) {
                AreaLabel::Known
            } else if m < border && rng.gen_bool(recon_share) {
                AreaLabel::Reconstructed
            } else {
                AreaLabel::Unknown
            };
            labels.push(label);
            let smooth = 128.0 + 80.0 * (fx * m as f64 + fy * n as f64 + phase).sin();
            values.push((smooth + rng.gen_range(-25.0..25.0)).clamp(0.0, 255.0));
        }
    }
    if !labels.iter().any(|l| l.is_support()) {
        let m = rng.gen_range(outside_rows..size);
        let n = rng.gen_range(outside_cols..size);
        labels[m * size + n] = AreaLabel::Known;
    }
    BlockContext::new(block, border, labels, values).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
