//! Frequency priors that bias basis selection towards low frequencies.
//!
//! Both priors share the base `1 - sqrt(2) * sqrt(k'^2/M^2 + l'^2/N^2)`, where
//! `k'` and `l'` are the frequency indices folded into `[0, M/2]` and
//! `[0, N/2]`. The OTF prior squares the base; the adaptive prior raises it to
//! `2 * alpha`, where `alpha` grows as the local data density falls.

use crate::error::{FsrError, Result};
use crate::params::{FsrParams, PriorKind};

/// Folded frequency `M/2 - |k - M/2|`.
#[inline]
pub fn fold(k: usize, len: usize) -> f64 {
    let half = len as f64 / 2.0;
    half - (k as f64 - half).abs()
}

/// Normalised squared radius `k'^2/M^2 + l'^2/N^2` of a frequency bin.
#[inline]
pub fn folded_radius_sq(k: usize, l: usize, rows: usize, cols: usize) -> f64 {
    let kf = fold(k, rows) / rows as f64;
    let lf = fold(l, cols) / cols as f64;
    kf * kf + lf * lf
}

#[inline]
fn prior_base(k: usize, l: usize, rows: usize, cols: usize) -> f64 {
    (1.0 - std::f64::consts::SQRT_2 * folded_radius_sq(k, l, rows, cols).sqrt()).max(0.0)
}

pub fn otf_prior(k: usize, l: usize, rows: usize, cols: usize) -> f64 {
    let b = prior_base(k, l, rows, cols);
    b * b
}

pub fn adaptive_prior(k: usize, l: usize, rows: usize, cols: usize, alpha: f64) -> f64 {
    // powf(0, 0) == 1, so alpha = 0 gives a flat prior.
    prior_base(k, l, rows, cols).powf(2.0 * alpha)
}

/// Maps the effective data measure to the adaptive prior exponent,
/// `alpha = -ln(omega) / tau`, clamped to `[0, alpha_max]`.
pub fn alpha_of_omega(omega: f64, params: &FsrParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(FsrError::param(format!(
            "effective density must lie in [0, 1], got {omega}"
        )));
    }
    let alpha = -omega.ln() / params.tau;
    Ok(alpha.clamp(0.0, params.alpha_max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PriorMap {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    kind: PriorKind,
    alpha: f64,
}

impl PriorMap {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.values[k * self.cols + l]
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    /// Exponent used by the adaptive prior; 1 for the OTF prior.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

pub fn build_prior_map(
    kind: PriorKind,
    rows: usize,
    cols: usize,
    omega: f64,
    params: &FsrParams,
) -> Result<PriorMap> {
    PriorTable::new(rows, cols)?.build(kind, omega, params)
}

/// Prior bases of one spectrum size, tabulated once so that repeated prior
/// maps only evaluate the exponent for each distinct folded frequency.
#[derive(Clone, Debug)]
pub struct PriorTable {
    rows: usize,
    cols: usize,
    /// Base value per distinct folded `(k', l')` pair.
    bases: Vec<f64>,
    /// Index into `bases` for every bin.
    index: Vec<usize>,
}

impl PriorTable {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
            return Err(FsrError::param(format!(
                "prior dimensions must be even and positive, got {rows}x{cols}"
            )));
        }
        let folded_cols = cols / 2 + 1;
        let mut bases = vec![0.0; (rows / 2 + 1) * folded_cols];
        for (kf, row) in bases.chunks_mut(folded_cols).enumerate() {
            for (lf, b) in row.iter_mut().enumerate() {
                *b = prior_base(kf, lf, rows, cols);
            }
        }
        let index = (0..rows)
            .flat_map(|k| (0..cols).map(move |l| (k, l)))
            .map(|(k, l)| {
                let kf = rows / 2 - k.abs_diff(rows / 2);
                let lf = cols / 2 - l.abs_diff(cols / 2);
                kf * folded_cols + lf
            })
            .collect();
        Ok(PriorTable {
            rows,
            cols,
            bases,
            index,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn build(&self, kind: PriorKind, omega: f64, params: &FsrParams) -> Result<PriorMap> {
        let (alpha, distinct): (f64, Vec<f64>) = match kind {
            PriorKind::None => (1.0, vec![1.0; self.bases.len()]),
            PriorKind::Otf => (1.0, self.bases.iter().map(|b| b * b).collect()),
            PriorKind::Adaptive => {
                let alpha = alpha_of_omega(omega, params)?;
                // powf(0, 0) == 1, so alpha = 0 gives a flat prior.
                (
                    alpha,
                    self.bases.iter().map(|b| b.powf(2.0 * alpha)).collect(),
                )
            }
        };
        Ok(PriorMap {
            rows: self.rows,
            cols: self.cols,
            values: self.index.iter().map(|&i| distinct[i]).collect(),
            kind,
            alpha,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_pointwise_priors() {
        let p = FsrParams::default();
        let table = PriorTable::new(32, 16).unwrap();
        let otf = table.build(PriorKind::Otf, 0.3, &p).unwrap();
        let ap = table.build(PriorKind::Adaptive, 0.3, &p).unwrap();
        let alpha = alpha_of_omega(0.3, &p).unwrap();
        for k in 0..32 {
            for l in 0..16 {
                assert_eq!(otf.get(k, l), otf_prior(k, l, 32, 16));
                assert_eq!(ap.get(k, l), adaptive_prior(k, l, 32, 16, alpha));
            }
        }
    }

    #[test]
    fn otf_examples() {
        assert_eq!(otf_prior(0, 0, 32, 32), 1.0);
        assert_eq!(otf_prior(16, 16, 32, 32), 0.0);
        let expected = (1.0 - 2f64.sqrt() * 0.25).powi(2);
        assert!((otf_prior(8, 0, 32, 32) - expected).abs() < 1e-15);
        assert!((otf_prior(8, 0, 32, 32) - 0.41789).abs() < 1e-5);
    }

    #[test]
    fn alpha_examples() {
        let p = FsrParams::default();
        assert_eq!(alpha_of_omega(1.0, &p).unwrap(), 0.0);
        assert!((alpha_of_omega((-p.tau).exp(), &p).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_of_omega(0.5, &p).unwrap() - 0.346_573_590_279_972_6).abs() < 1e-15);
        assert_eq!(alpha_of_omega(0.0, &p).unwrap(), p.alpha_max);
        assert!(alpha_of_omega(-0.01, &p).is_err());
        assert!(alpha_of_omega(1.01, &p).is_err());
        assert!(alpha_of_omega(f64::NAN, &p).is_err());
    }

    #[test]
    fn adaptive_examples() {
        for k in 0..32 {
            for l in 0..32 {
                assert_eq!(adaptive_prior(k, l, 32, 32, 0.0), 1.0);
                let a = adaptive_prior(k, l, 32, 32, 1.0);
                assert!((a - otf_prior(k, l, 32, 32)).abs() < 1e-15);
            }
        }
        let expected = (1.0 - 2f64.sqrt() * 0.25).powi(4);
        assert!((adaptive_prior(8, 0, 32, 32, 2.0) - expected).abs() < 1e-15);
        assert!((adaptive_prior(8, 0, 32, 32, 2.0) - 0.17464).abs() < 1e-5);
    }

    #[test]
    fn prior_map_kinds() {
        let p = FsrParams::default();
        let none = build_prior_map(PriorKind::None, 32, 32, 0.3, &p).unwrap();
        assert!(none.values().iter().all(|&v| v == 1.0));

        let otf = build_prior_map(PriorKind::Otf, 32, 32, 0.3, &p).unwrap();
        let ap = build_prior_map(PriorKind::Adaptive, 32, 32, (-p.tau).exp(), &p).unwrap();
        for (a, b) in otf.values().iter().zip(ap.values()) {
            assert!((a - b).abs() < 1e-15);
        }

        let sparse = build_prior_map(PriorKind::Adaptive, 32, 32, 0.1, &p).unwrap();
        let dense = build_prior_map(PriorKind::Adaptive, 32, 32, 0.6, &p).unwrap();
        for (s, d) in sparse.values().iter().zip(dense.values()) {
            assert!(s <= d);
        }
        assert!(build_prior_map(PriorKind::Otf, 31, 32, 0.3, &p).is_err());
    }
}
