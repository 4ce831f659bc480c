//! Image buffers, sampling masks and block geometry.
//!
//! Images are processed in square blocks of `block_size` pixels in raster
//! order. Each block is reconstructed together with a `border`-wide
//! neighbourhood; the union is the extrapolation area, whose pixels are
//! labelled as known, unknown, previously reconstructed, or outside the image.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{FsrError, Result};
use crate::params::FsrParams;

/// Single-channel image on a regular grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(FsrError::param("image dimensions must be at least 1x1"));
        }
        if samples.len() != width * height {
            return Err(FsrError::param(format!(
                "expected {} samples for a {width}x{height} image, got {}",
                width * height,
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(FsrError::param(format!("sample {i} is not finite")));
        }
        Ok(ImageGrid {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                samples.push(f(row, col));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.samples[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.samples[row * self.width + col] = value;
    }

    pub(crate) fn check_same_dims(&self, width: usize, height: usize) -> Result<()> {
        if self.width != width || self.height != height {
            return Err(FsrError::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width,
                height,
            });
        }
        Ok(())
    }
}

/// Per-pixel availability flags; `true` means the sample is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingMask {
    width: usize,
    height: usize,
    flags: Vec<bool>,
}

impl SamplingMask {
    pub fn new(width: usize, height: usize, flags: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(FsrError::param("mask dimensions must be at least 1x1"));
        }
        if flags.len() != width * height {
            return Err(FsrError::param(format!(
                "expected {} flags for a {width}x{height} mask, got {}",
                width * height,
                flags.len()
            )));
        }
        Ok(SamplingMask {
            width,
            height,
            flags,
        })
    }

    pub fn full(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    #[inline]
    pub fn is_known(&self, row: usize, col: usize) -> bool {
        self.flags[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, known: bool) {
        self.flags[row * self.width + col] = known;
    }

    pub fn known_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn density(&self) -> f64 {
        self.known_count() as f64 / self.flags.len() as f64
    }

    /// Copies `image` at known positions and zeroes everything else.
    pub fn apply(&self, image: &ImageGrid) -> Result<ImageGrid> {
        image.check_same_dims(self.width, self.height)?;
        let samples = image
            .samples()
            .iter()
            .zip(&self.flags)
            .map(|(&v, &k)| if k { v } else { 0.0 })
            .collect();
        ImageGrid::new(self.width, self.height, samples)
    }
}

/// Draws `round(density * width * height)` known positions uniformly without
/// replacement. Identical arguments give identical masks.
pub fn generate_mask(width: usize, height: usize, density: f64, seed: u64) -> Result<SamplingMask> {
    if !(0.0..=1.0).contains(&density) {
        return Err(FsrError::param(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let total = width * height;
    let count = ((density * total as f64).round() as usize).min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flags = vec![false; total];
    for i in index::sample(&mut rng, total, count).iter() {
        flags[i] = true;
    }
    SamplingMask::new(width, height, flags)
}

/// Role of a pixel inside an extrapolation area.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AreaLabel {
    /// Originally available sample.
    Known,
    /// Sample still to be estimated.
    Unknown,
    /// Sample estimated while processing an earlier block.
    Reconstructed,
    /// Beyond the image bounds.
    Outside,
}

impl AreaLabel {
    pub fn is_support(self) -> bool {
        matches!(self, AreaLabel::Known | AreaLabel::Reconstructed)
    }
}

/// Block index in the raster-order block grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockPos {
    pub row: usize,
    pub col: usize,
}

/// Raster-order blocks covering an image; the last row/column of blocks may
/// extend past the image edge.
pub fn block_grid(width: usize, height: usize, block_size: usize) -> (usize, usize) {
    (height.div_ceil(block_size), width.div_ceil(block_size))
}

pub fn blocks_in_raster_order(
    width: usize,
    height: usize,
    block_size: usize,
) -> impl Iterator<Item = BlockPos> {
    let (rows, cols) = block_grid(width, height, block_size);
    (0..rows).flat_map(move |row| (0..cols).map(move |col| BlockPos { row, col }))
}

/// One square extrapolation area around a block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockContext {
    size: usize,
    block_size: usize,
    border: usize,
    /// Image coordinates of the area's top-left pixel; may be negative.
    origin: (isize, isize),
    labels: Vec<AreaLabel>,
    values: Vec<f64>,
}

impl BlockContext {
    /// Builds a free-standing context, e.g. for tests. Values at unknown and
    /// outside positions are forced to zero.
    pub fn new(
        block_size: usize,
        border: usize,
        labels: Vec<AreaLabel>,
        mut values: Vec<f64>,
    ) -> Result<Self> {
        let size = block_size + 2 * border;
        if block_size == 0 {
            return Err(FsrError::param("block_size must be at least 1"));
        }
        if labels.len() != size * size || values.len() != size * size {
            return Err(FsrError::param(format!(
                "a {size}x{size} area needs {} labels and values",
                size * size
            )));
        }
        for (v, l) in values.iter_mut().zip(&labels) {
            if !l.is_support() {
                *v = 0.0;
            } else if !v.is_finite() {
                return Err(FsrError::param("context values must be finite"));
            }
        }
        Ok(BlockContext {
            size,
            block_size,
            border,
            origin: (-(border as isize), -(border as isize)),
            labels,
            values,
        })
    }

    /// Side length M = N of the area.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn border(&self) -> usize {
        self.border
    }

    pub fn origin(&self) -> (isize, isize) {
        self.origin
    }

    pub fn labels(&self) -> &[AreaLabel] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn label(&self, m: usize, n: usize) -> AreaLabel {
        self.labels[m * self.size + n]
    }

    #[inline]
    pub fn value(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.size + n]
    }

    pub fn count(&self, label: AreaLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Area coordinates of the centre block, row-major.
    pub fn center_coords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let lo = self.border;
        let hi = self.border + self.block_size;
        (lo..hi).flat_map(move |m| (lo..hi).map(move |n| (m, n)))
    }
}

/// Extracts the extrapolation area of block `pos`.
///
/// `working` holds original samples at known positions and estimates at
/// positions flagged in `recon_map`.
pub fn build_block_context(
    working: &ImageGrid,
    mask: &SamplingMask,
    recon_map: &[bool],
    pos: BlockPos,
    params: &FsrParams,
) -> Result<BlockContext> {
    working.check_same_dims(mask.width(), mask.height())?;
    if recon_map.len() != mask.flags().len() {
        return Err(FsrError::param(format!(
            "reconstruction map has {} entries, expected {}",
            recon_map.len(),
            mask.flags().len()
        )));
    }
    let (width, height) = (working.width(), working.height());
    let b = params.block_size;
    let (block_rows, block_cols) = block_grid(width, height, b);
    if pos.row >= block_rows || pos.col >= block_cols {
        return Err(FsrError::param(format!(
            "block ({}, {}) outside the {block_rows}x{block_cols} block grid",
            pos.row, pos.col
        )));
    }
    let size = params.area_size();
    let origin = (
        (pos.row * b) as isize - params.border as isize,
        (pos.col * b) as isize - params.border as isize,
    );

    let mut labels = Vec::with_capacity(size * size);
    let mut values = Vec::with_capacity(size * size);
    for m in 0..size {
        let y = origin.0 + m as isize;
        for n in 0..size {
            let x = origin.1 + n as isize;
            if y < 0 || x < 0 || y >= height as isize || x >= width as isize {
                labels.push(AreaLabel::Outside);
                values.push(0.0);
                continue;
            }
            let (y, x) = (y as usize, x as usize);
            let idx = y * width + x;
            if mask.flags()[idx] {
                labels.push(AreaLabel::Known);
                values.push(working.samples()[idx]);
            } else if recon_map[idx] {
                labels.push(AreaLabel::Reconstructed);
                values.push(working.samples()[idx]);
            } else {
                labels.push(AreaLabel::Unknown);
                values.push(0.0);
            }
        }
    }
    Ok(BlockContext {
        size,
        block_size: b,
        border: params.border,
        origin,
        labels,
        values,
    })
}
