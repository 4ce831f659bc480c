//! Frequency selective reconstruction of one extrapolation area and of whole
//! images.
//!
//! The signal in an area of size `M x M` is modelled as a superposition of 2D
//! DFT basis functions `exp(j2pi(mk + nl)/M)`. Each iteration picks the basis
//! function whose weighted projection, scaled by the frequency prior, is
//! largest, adds `gamma` times that projection to the model and subtracts it
//! from the residual. Basis functions are always added together with their
//! complex-conjugate partner so the model stays real.
//!
//! The fast path keeps only the spectrum of the weighted residual. Since
//! `DFT(w * phi_uv)[k, l] = W[k - u, l - v]`, an update is a shifted copy of
//! the weight spectrum `W` scaled by the new coefficient. The literal spatial
//! implementation lives in [`reference`] and serves as an oracle.

pub mod reference;

use num_complex::Complex64;

use crate::error::{FsrError, Result};
use crate::grid::{
    blocks_in_raster_order, build_block_context, AreaLabel, BlockContext, ImageGrid, SamplingMask,
};
use crate::params::FsrParams;
use crate::priors::{folded_radius_sq, PriorMap, PriorTable};
use crate::spectrum::Fft2d;
use crate::weighting::{build_weight_map_with, effective_density_with, DecayTable, WeightMap};

/// Largest representable 8-bit amplitude; model output is clamped to `[0, PEAK]`.
pub const PEAK: f64 = 255.0;

/// Fill value for blocks without support when the image has no samples at all.
pub const EMPTY_IMAGE_FILL: f64 = 128.0;

/// Bin index of the conjugate partner of `(k, l)`.
#[inline]
pub fn conjugate_bin(k: usize, l: usize, size: usize) -> (usize, usize) {
    ((size - k) % size, (size - l) % size)
}

/// Candidate bins for basis selection, in tie-breaking order.
///
/// A bin and its conjugate partner describe the same real update, so only the
/// lexicographically smaller of each pair is a candidate. Candidates are
/// sorted by folded radial frequency, then by `(k, l)`; the first candidate
/// with the largest objective wins.
#[derive(Clone, Debug)]
pub struct BasisOrder {
    size: usize,
    bins: Vec<(usize, usize)>,
}

impl BasisOrder {
    pub fn new(size: usize) -> Self {
        let mut bins: Vec<(usize, usize)> = (0..size)
            .flat_map(|k| (0..size).map(move |l| (k, l)))
            .filter(|&(k, l)| (k, l) <= conjugate_bin(k, l, size))
            .collect();
        bins.sort_by(|a, b| {
            folded_radius_sq(a.0, a.1, size, size)
                .total_cmp(&folded_radius_sq(b.0, b.1, size, size))
                .then(a.cmp(b))
        });
        BasisOrder { size, bins }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bins(&self) -> &[(usize, usize)] {
        &self.bins
    }

    /// Returns the first candidate maximising `objective`.
    pub fn argmax(&self, mut objective: impl FnMut(usize, usize) -> f64) -> (usize, usize) {
        let mut best = self.bins[0];
        let mut best_val = f64::NEG_INFINITY;
        for &(k, l) in &self.bins {
            let val = objective(k, l);
            if val > best_val {
                best_val = val;
                best = (k, l);
            }
        }
        best
    }

    /// Argmax of `|p|^2 * wf` over the candidates. The constant
    /// `sum(phi* w phi) = sum(w)` factor is dropped.
    pub fn select(&self, projections: &[Complex64], prior: &PriorMap) -> (usize, usize) {
        let s = self.size;
        self.argmax(|k, l| projections[k * s + l].norm_sqr() * prior.get(k, l))
    }
}

/// Selects the basis function for the next update from a full projection map.
pub fn select_basis(projections: &[Complex64], prior: &PriorMap) -> (usize, usize) {
    BasisOrder::new(prior.rows()).select(projections, prior)
}

/// Iterative model of one extrapolation area, maintained in the frequency
/// domain.
#[derive(Clone, Debug)]
pub struct ModelState {
    size: usize,
    coefficients: Vec<Complex64>,
    selected: Vec<(usize, usize)>,
    residual_spectrum: Vec<Complex64>,
    weight_spectrum: Vec<Complex64>,
    weight_sum: f64,
    iteration: usize,
}

impl ModelState {
    /// Zero model; the residual equals the context values.
    pub fn init(ctx: &BlockContext, weights: &WeightMap) -> Self {
        Self::init_with(ctx, weights, &mut Fft2d::new(ctx.size()))
    }

    pub fn init_with(ctx: &BlockContext, weights: &WeightMap, fft: &mut Fft2d) -> Self {
        let size = ctx.size();
        debug_assert_eq!(weights.size(), size);
        let weighted: Vec<f64> = ctx
            .values()
            .iter()
            .zip(weights.weights())
            .map(|(v, w)| v * w)
            .collect();
        ModelState {
            size,
            coefficients: vec![Complex64::default(); size * size],
            selected: Vec::new(),
            residual_spectrum: fft.forward_real(&weighted),
            weight_spectrum: fft.forward_real(weights.weights()),
            weight_sum: weights.weight_sum(),
            iteration: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Accumulated coefficient per bin, conjugate partners included.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Bins chosen so far, one per iteration.
    pub fn selected(&self) -> &[(usize, usize)] {
        &self.selected
    }

    /// `DFT(r * w)` of the current residual `r`.
    pub fn residual_spectrum(&self) -> &[Complex64] {
        &self.residual_spectrum
    }

    pub fn weight_spectrum(&self) -> &[Complex64] {
        &self.weight_spectrum
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    #[inline]
    pub fn projection(&self, k: usize, l: usize) -> Complex64 {
        self.residual_spectrum[k * self.size + l] / self.weight_sum
    }

    pub fn projections(&self) -> Result<Vec<Complex64>> {
        if self.weight_sum <= 0.0 {
            return Err(FsrError::EmptyBlock);
        }
        Ok(self
            .residual_spectrum
            .iter()
            .map(|r| r / self.weight_sum)
            .collect())
    }

    /// Adds `gamma * p_uv` at `(u, v)` and its conjugate at the partner bin.
    /// Self-conjugate bins take the real part once.
    pub fn update(&mut self, u: usize, v: usize, p_uv: Complex64, gamma: f64) {
        let s = self.size;
        let (pu, pv) = conjugate_bin(u, v, s);
        if (pu, pv) == (u, v) {
            let c = Complex64::new(gamma * p_uv.re, 0.0);
            self.coefficients[u * s + v] += c;
            subtract_shifted(
                &mut self.residual_spectrum,
                &self.weight_spectrum,
                c,
                u,
                v,
                s,
            );
        } else {
            let c = gamma * p_uv;
            self.coefficients[u * s + v] += c;
            self.coefficients[pu * s + pv] += c.conj();
            subtract_shifted(
                &mut self.residual_spectrum,
                &self.weight_spectrum,
                c,
                u,
                v,
                s,
            );
            subtract_shifted(
                &mut self.residual_spectrum,
                &self.weight_spectrum,
                c.conj(),
                pu,
                pv,
                s,
            );
        }
        self.selected.push((u, v));
        self.iteration += 1;
    }

    /// Model `g[m, n]` over the whole area.
    pub fn synthesize(&self, fft: &mut Fft2d) -> Vec<Complex64> {
        let mut g = self.coefficients.clone();
        fft.inverse(&mut g);
        g
    }
}

/// `target[k, l] -= coeff * source[(k - du) mod s, (l - dv) mod s]`.
fn subtract_shifted(
    target: &mut [Complex64],
    source: &[Complex64],
    coeff: Complex64,
    du: usize,
    dv: usize,
    s: usize,
) {
    for k in 0..s {
        let sk = (k + s - du) % s;
        let src = &source[sk * s..(sk + 1) * s];
        let dst = &mut target[k * s..(k + 1) * s];
        let (dst_wrap, dst_rest) = dst.split_at_mut(dv);
        for (d, w) in dst_wrap.iter_mut().zip(&src[s - dv..]) {
            *d -= coeff * w;
        }
        for (d, w) in dst_rest.iter_mut().zip(&src[..s - dv]) {
            *d -= coeff * w;
        }
    }
}

/// Reconstructed centre block plus diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockReconstruction {
    pub block_size: usize,
    /// Row-major `block_size x block_size` patch.
    pub patch: Vec<f64>,
    /// Effective data measure of the area.
    pub omega: f64,
    /// Prior exponent in use (1 for the OTF prior).
    pub alpha: f64,
    /// Selected bin per iteration.
    pub selected: Vec<(usize, usize)>,
}

impl BlockReconstruction {
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.patch[row * self.block_size + col]
    }
}

/// Takes model values for the centre block, keeping known samples and
/// clamping to the amplitude range.
pub(crate) fn center_patch(ctx: &BlockContext, model: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    ctx.center_coords()
        .map(|(m, n)| match ctx.label(m, n) {
            AreaLabel::Known => ctx.value(m, n),
            _ => model(m, n).clamp(0.0, PEAK),
        })
        .collect()
}

/// Reusable per-size state for reconstructing many blocks.
pub struct BlockReconstructor {
    params: FsrParams,
    fft: Fft2d,
    order: BasisOrder,
    decay: DecayTable,
    priors: PriorTable,
}

impl BlockReconstructor {
    pub fn new(params: FsrParams) -> Result<Self> {
        params.validate()?;
        let size = params.area_size();
        Ok(BlockReconstructor {
            params,
            fft: Fft2d::new(size),
            order: BasisOrder::new(size),
            decay: DecayTable::new(size, params.rho_hat),
            priors: PriorTable::new(size, size)?,
        })
    }

    pub fn params(&self) -> &FsrParams {
        &self.params
    }

    /// Fails with [`FsrError::EmptyBlock`] when the area has no known or
    /// reconstructed sample.
    pub fn reconstruct(&mut self, ctx: &BlockContext) -> Result<BlockReconstruction> {
        let p = &self.params;
        if ctx.size() != p.area_size() || ctx.block_size() != p.block_size {
            return Err(FsrError::param(format!(
                "context of size {} does not match area size {}",
                ctx.size(),
                p.area_size()
            )));
        }
        let weights = build_weight_map_with(ctx, p, &self.decay);
        if weights.weight_sum() <= 0.0 {
            return Err(FsrError::EmptyBlock);
        }
        let omega = effective_density_with(ctx, &weights, &self.decay);
        let size = ctx.size();
        let prior = self.priors.build(p.prior, omega, p)?;

        let mut state = ModelState::init_with(ctx, &weights, &mut self.fft);
        for _ in 0..p.iterations {
            let (u, v) = self
                .order
                .argmax(|k, l| state.projection(k, l).norm_sqr() * prior.get(k, l));
            let p_uv = state.projection(u, v);
            state.update(u, v, p_uv, p.gamma);
        }
        let g = state.synthesize(&mut self.fft);
        let patch = center_patch(ctx, |m, n| g[m * size + n].re);
        Ok(BlockReconstruction {
            block_size: ctx.block_size(),
            patch,
            omega,
            alpha: prior.alpha(),
            selected: state.selected,
        })
    }
}

pub fn reconstruct_block(ctx: &BlockContext, params: &FsrParams) -> Result<BlockReconstruction> {
    BlockReconstructor::new(*params)?.reconstruct(ctx)
}

/// Output of a whole-image reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub image: ImageGrid,
    pub blocks: usize,
    /// Blocks filled with a mean value because their area had no support.
    pub fallback_blocks: usize,
}

/// Reconstructs all unknown pixels block by block in raster order, reusing
/// finished blocks as attenuated support for later ones.
pub fn reconstruct_image(
    image: &ImageGrid,
    mask: &SamplingMask,
    params: &FsrParams,
) -> Result<ImageGrid> {
    reconstruct_image_with_stats(image, mask, params).map(|r| r.image)
}

pub fn reconstruct_image_with_stats(
    image: &ImageGrid,
    mask: &SamplingMask,
    params: &FsrParams,
) -> Result<Reconstruction> {
    image.check_same_dims(mask.width(), mask.height())?;
    let mut reconstructor = BlockReconstructor::new(*params)?;
    let (width, height) = (image.width(), image.height());
    let b = params.block_size;

    let mut working = mask.apply(image)?;
    let mut recon_map = vec![false; width * height];
    // Running mean over known and reconstructed samples, used for empty areas.
    let mut support_sum: f64 = image
        .samples()
        .iter()
        .zip(mask.flags())
        .filter(|(_, &k)| k)
        .map(|(v, _)| v)
        .sum();
    let mut support_count = mask.known_count();

    let mut blocks = 0;
    let mut fallback_blocks = 0;
    for pos in blocks_in_raster_order(width, height, b) {
        blocks += 1;
        let ctx = build_block_context(&working, mask, &recon_map, pos, params)?;
        if ctx
            .center_coords()
            .all(|(m, n)| ctx.label(m, n) != AreaLabel::Unknown)
        {
            // Nothing missing: known samples pass through unchanged.
            continue;
        }
        let rows = (pos.row * b..((pos.row + 1) * b).min(height)).map(|y| (y, y - pos.row * b));
        match reconstructor.reconstruct(&ctx) {
            Ok(block) => {
                for (y, br) in rows {
                    for x in pos.col * b..((pos.col + 1) * b).min(width) {
                        if mask.is_known(y, x) {
                            continue;
                        }
                        let v = block.get(br, x - pos.col * b);
                        working.set(y, x, v);
                        recon_map[y * width + x] = true;
                        support_sum += v;
                        support_count += 1;
                    }
                }
            }
            Err(FsrError::EmptyBlock) => {
                fallback_blocks += 1;
                let fill = if support_count > 0 {
                    support_sum / support_count as f64
                } else {
                    EMPTY_IMAGE_FILL
                };
                // Fallback pixels are not trusted as support for later blocks.
                for (y, _) in rows {
                    for x in pos.col * b..((pos.col + 1) * b).min(width) {
                        if !mask.is_known(y, x) {
                            working.set(y, x, fill);
                        }
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Reconstruction {
        image: working,
        blocks,
        fallback_blocks,
    })
}
