//! Spatial weighting of the extrapolation area and the effective data measure.

use crate::grid::{AreaLabel, BlockContext};
use crate::params::FsrParams;

/// Undamped isotropic decay `rho_hat^d`, with `d` the distance of `(m, n)`
/// from the centre of an `rows x cols` area.
#[inline]
pub fn decay(m: usize, n: usize, rows: usize, cols: usize, rho_hat: f64) -> f64 {
    let dm = m as f64 - (rows as f64 - 1.0) / 2.0;
    let dn = n as f64 - (cols as f64 - 1.0) / 2.0;
    rho_hat.powf((dm * dm + dn * dn).sqrt())
}

/// Weight of one area pixel: full decay for known samples, decay scaled by
/// `delta` for reconstructed ones, zero otherwise.
pub fn spatial_weight(
    m: usize,
    n: usize,
    label: AreaLabel,
    rows: usize,
    cols: usize,
    params: &FsrParams,
) -> f64 {
    match label {
        AreaLabel::Known => decay(m, n, rows, cols, params.rho_hat),
        AreaLabel::Reconstructed => params.delta * decay(m, n, rows, cols, params.rho_hat),
        AreaLabel::Unknown | AreaLabel::Outside => 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightMap {
    size: usize,
    weights: Vec<f64>,
    weight_sum: f64,
}

impl WeightMap {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.weights[m * self.size + n]
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }
}

/// Decay values `rho_hat^d` of a square area, tabulated once per area size.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayTable {
    size: usize,
    values: Vec<f64>,
    total: f64,
}

impl DecayTable {
    pub fn new(size: usize, rho_hat: f64) -> Self {
        let values: Vec<f64> = (0..size)
            .flat_map(|m| (0..size).map(move |n| decay(m, n, size, size, rho_hat)))
            .collect();
        let total = values.iter().sum();
        DecayTable {
            size,
            values,
            total,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.size + n]
    }

    /// Decay mass of the whole area.
    pub fn total(&self) -> f64 {
        self.total
    }
}

pub fn build_weight_map(ctx: &BlockContext, params: &FsrParams) -> WeightMap {
    build_weight_map_with(ctx, params, &DecayTable::new(ctx.size(), params.rho_hat))
}

/// [`build_weight_map`] with a precomputed decay table of matching size.
pub fn build_weight_map_with(
    ctx: &BlockContext,
    params: &FsrParams,
    table: &DecayTable,
) -> WeightMap {
    let size = ctx.size();
    assert_eq!(table.size(), size, "decay table size mismatch");
    let mut weights = Vec::with_capacity(size * size);
    for m in 0..size {
        for n in 0..size {
            weights.push(match ctx.label(m, n) {
                AreaLabel::Known => table.get(m, n),
                AreaLabel::Reconstructed => params.delta * table.get(m, n),
                AreaLabel::Unknown | AreaLabel::Outside => 0.0,
            });
        }
    }
    let weight_sum = weights.iter().sum();
    WeightMap {
        size,
        weights,
        weight_sum,
    }
}

/// Weighted share of supporting samples in the area, normalised by the decay
/// mass of the whole area (including unknown and outside positions).
pub fn effective_density(ctx: &BlockContext, weights: &WeightMap, params: &FsrParams) -> f64 {
    effective_density_with(ctx, weights, &DecayTable::new(ctx.size(), params.rho_hat))
}

/// [`effective_density`] with a precomputed decay table of matching size.
pub fn effective_density_with(ctx: &BlockContext, weights: &WeightMap, table: &DecayTable) -> f64 {
    let size = ctx.size();
    assert_eq!(table.size(), size, "decay table size mismatch");
    let mut support = 0.0;
    for m in 0..size {
        for n in 0..size {
            if ctx.label(m, n).is_support() {
                support += weights.get(m, n);
            }
        }
    }
    (support / table.total()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AreaLabel::*;

    fn uniform_ctx(block: usize, border: usize, label: AreaLabel) -> BlockContext {
        let s = block + 2 * border;
        BlockContext::new(block, border, vec![label; s * s], vec![1.0; s * s]).unwrap()
    }

    #[test]
    fn weight_examples() {
        let p = FsrParams::default();
        assert_eq!(spatial_weight(3, 9, Unknown, 32, 32, &p), 0.0);
        assert_eq!(spatial_weight(16, 16, Outside, 32, 32, &p), 0.0);
        let a = spatial_weight(16, 16, Known, 32, 32, &p);
        let expected = (0.5f64.sqrt() * 0.7f64.ln()).exp();
        assert!((a - expected).abs() < 1e-14);
        assert!((a - 0.777_08).abs() < 1e-5);
        let r = spatial_weight(16, 16, Reconstructed, 32, 32, &p);
        assert!((r - a / 2.0).abs() < 1e-15);
        assert!((r - 0.3886).abs() < 1e-4);
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let p = FsrParams::default();
        let t = DecayTable::new(32, p.rho_hat);
        let mut total = 0.0;
        for m in 0..32 {
            for n in 0..32 {
                assert_eq!(t.get(m, n), decay(m, n, 32, 32, p.rho_hat));
                assert_eq!(t.get(m, n), spatial_weight(m, n, Known, 32, 32, &p));
                total += decay(m, n, 32, 32, p.rho_hat);
            }
        }
        assert!((t.total() - total).abs() < 1e-12 * total);
    }

    #[test]
    fn all_unknown_map_is_zero() {
        let ctx = uniform_ctx(4, 2, Unknown);
        let w = build_weight_map(&ctx, &FsrParams::default());
        assert!(w.weights().iter().all(|&v| v == 0.0));
        assert_eq!(w.weight_sum(), 0.0);
        assert_eq!(effective_density(&ctx, &w, &FsrParams::default()), 0.0);
    }

    #[test]
    fn unit_decay_is_indicator() {
        let ctx = uniform_ctx(4, 14, Known);
        let p = FsrParams {
            rho_hat: 1.0,
            ..Default::default()
        };
        let w = build_weight_map(&ctx, &p);
        assert!(w.weights().iter().all(|&v| v == 1.0));
        assert_eq!(w.weight_sum(), 1024.0);
    }

    #[test]
    fn density_of_uniform_labels() {
        let p = FsrParams::default();
        let known = uniform_ctx(4, 14, Known);
        let w = build_weight_map(&known, &p);
        assert_eq!(effective_density(&known, &w, &p), 1.0);

        let recon = uniform_ctx(4, 14, Reconstructed);
        let w = build_weight_map(&recon, &p);
        let omega = effective_density(&recon, &w, &p);
        assert!((omega - p.delta).abs() < 1e-12 * p.delta);
    }
}
