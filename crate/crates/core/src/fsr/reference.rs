//! Direct spatial-domain implementation of the model generation.
//!
//! Every quantity is evaluated from its defining sum over the area: the
//! weighted projection with its full denominator, the selection objective
//! including the `sum(phi* w phi)` factor, and the model and residual updates
//! on pixel values. Cost is `O(M^4)` per iteration, so this is meant for small
//! areas and for checking the frequency-domain path.

use num_complex::Complex64;

use super::{center_patch, conjugate_bin, BasisOrder, BlockReconstruction};
use crate::error::{FsrError, Result};
use crate::grid::BlockContext;
use crate::params::FsrParams;
use crate::priors::{build_prior_map, PriorMap};
use crate::weighting::{build_weight_map, effective_density, WeightMap};

/// Tabulated `exp(j2pi t / size)` for the basis functions.
#[derive(Clone, Debug)]
pub struct Basis {
    size: usize,
    twiddles: Vec<Complex64>,
}

impl Basis {
    pub fn new(size: usize) -> Self {
        let twiddles = (0..size)
            .map(|t| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / size as f64)
            })
            .collect();
        Basis { size, twiddles }
    }

    /// `phi_(k,l)[m, n] = exp(j2pi(mk + nl) / size)`.
    #[inline]
    pub fn phi(&self, k: usize, l: usize, m: usize, n: usize) -> Complex64 {
        self.twiddles[(m * k + n * l) % self.size]
    }
}

/// Spatial model and residual of one area.
#[derive(Clone, Debug)]
pub struct SpatialModel {
    size: usize,
    basis: Basis,
    weights: Vec<f64>,
    model: Vec<Complex64>,
    residual: Vec<Complex64>,
    selected: Vec<(usize, usize)>,
}

impl SpatialModel {
    pub fn new(ctx: &BlockContext, weights: &WeightMap) -> Self {
        let size = ctx.size();
        SpatialModel {
            size,
            basis: Basis::new(size),
            weights: weights.weights().to_vec(),
            model: vec![Complex64::default(); size * size],
            residual: ctx
                .values()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
            selected: Vec::new(),
        }
    }

    pub fn model(&self) -> &[Complex64] {
        &self.model
    }

    pub fn residual(&self) -> &[Complex64] {
        &self.residual
    }

    pub fn selected(&self) -> &[(usize, usize)] {
        &self.selected
    }

    /// `sum_{m,n} phi*[m,n] w[m,n] phi[m,n]`.
    pub fn basis_energy(&self, k: usize, l: usize) -> Complex64 {
        let s = self.size;
        let mut acc = Complex64::default();
        for m in 0..s {
            for n in 0..s {
                let phi = self.basis.phi(k, l, m, n);
                acc += phi.conj() * self.weights[m * s + n] * phi;
            }
        }
        acc
    }

    /// Weighted projection of the residual onto `phi_(k,l)`.
    pub fn projection(&self, k: usize, l: usize) -> Result<Complex64> {
        let s = self.size;
        let mut num = Complex64::default();
        for m in 0..s {
            for n in 0..s {
                num += self.residual[m * s + n]
                    * self.basis.phi(k, l, m, n).conj()
                    * self.weights[m * s + n];
            }
        }
        let den = self.basis_energy(k, l);
        if den.norm() == 0.0 {
            return Err(FsrError::EmptyBlock);
        }
        Ok(num / den)
    }

    /// Selection objective `|p|^2 * wf * sum(phi* w phi)`.
    pub fn objective(&self, k: usize, l: usize, prior: &PriorMap) -> Result<f64> {
        let p = self.projection(k, l)?;
        Ok(p.norm_sqr() * prior.get(k, l) * self.basis_energy(k, l).re)
    }

    pub fn select(&self, order: &BasisOrder, prior: &PriorMap) -> Result<(usize, usize)> {
        let mut err = None;
        let best = order.argmax(|k, l| match self.objective(k, l, prior) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NEG_INFINITY
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(best),
        }
    }

    /// Adds `gamma * p` along `phi_(u,v)` and its conjugate partner to the
    /// model and removes it from the residual.
    pub fn update(&mut self, u: usize, v: usize, p: Complex64, gamma: f64) {
        let s = self.size;
        let partner = conjugate_bin(u, v, s);
        let terms: Vec<((usize, usize), Complex64)> = if partner == (u, v) {
            vec![((u, v), Complex64::new(gamma * p.re, 0.0))]
        } else {
            let c = gamma * p;
            vec![((u, v), c), (partner, c.conj())]
        };
        for ((k, l), c) in terms {
            for m in 0..s {
                for n in 0..s {
                    let delta = c * self.basis.phi(k, l, m, n);
                    self.model[m * s + n] += delta;
                    self.residual[m * s + n] -= delta;
                }
            }
        }
        self.selected.push((u, v));
    }

    /// `sum w |r|^2`.
    pub fn weighted_residual_energy(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * r.norm_sqr())
            .sum()
    }

    /// `DFT(r * w)` evaluated by direct summation.
    pub fn weighted_residual_spectrum(&self) -> Vec<Complex64> {
        let s = self.size;
        let mut out = vec![Complex64::default(); s * s];
        for k in 0..s {
            for l in 0..s {
                let mut acc = Complex64::default();
                for m in 0..s {
                    for n in 0..s {
                        acc += self.residual[m * s + n]
                            * self.weights[m * s + n]
                            * self.basis.phi(k, l, m, n).conj();
                    }
                }
                out[k * s + l] = acc;
            }
        }
        out
    }
}

/// Spatial-domain counterpart of [`super::reconstruct_block`].
pub fn reconstruct_block_reference(
    ctx: &BlockContext,
    params: &FsrParams,
) -> Result<BlockReconstruction> {
    params.validate()?;
    let weights = build_weight_map(ctx, params);
    if weights.weight_sum() <= 0.0 {
        return Err(FsrError::EmptyBlock);
    }
    let omega = effective_density(ctx, &weights, params);
    let size = ctx.size();
    let prior = build_prior_map(params.prior, size, size, omega, params)?;
    let order = BasisOrder::new(size);

    let mut model = SpatialModel::new(ctx, &weights);
    for _ in 0..params.iterations {
        let (u, v) = model.select(&order, &prior)?;
        let p = model.projection(u, v)?;
        model.update(u, v, p, params.gamma);
    }
    let patch = center_patch(ctx, |m, n| model.model[m * size + n].re);
    Ok(BlockReconstruction {
        block_size: ctx.block_size(),
        patch,
        omega,
        alpha: prior.alpha(),
        selected: model.selected,
    })
}
