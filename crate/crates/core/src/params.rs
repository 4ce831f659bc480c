use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FsrError, Result};

/// Frequency prior used to modulate basis selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    /// Fixed prior approximating a diffraction-limited optical transfer function.
    Otf,
    /// OTF-shaped prior whose exponent follows the local effective data density.
    Adaptive,
    /// Flat prior (ablation mode).
    None,
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorKind::Otf => "otf",
            PriorKind::Adaptive => "adaptive",
            PriorKind::None => "none",
        })
    }
}

impl FromStr for PriorKind {
    type Err = FsrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "otf" => Ok(PriorKind::Otf),
            "adaptive" | "ap" => Ok(PriorKind::Adaptive),
            "none" => Ok(PriorKind::None),
            other => Err(FsrError::param(format!("unknown prior kind {other:?}"))),
        }
    }
}

/// Tunables of the block-wise reconstruction.
///
/// The extrapolation area is square with side `block_size + 2 * border`,
/// which must be even.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FsrParams {
    /// Spatial decay of the weighting function, in (0, 1].
    pub rho_hat: f64,
    /// Attenuation applied to previously reconstructed samples, in (0, 1].
    pub delta: f64,
    /// Orthogonality deficiency compensation, in (0, 1].
    pub gamma: f64,
    /// Density at which the adaptive prior equals the OTF prior is `exp(-tau)`.
    pub tau: f64,
    pub block_size: usize,
    pub border: usize,
    pub iterations: usize,
    pub prior: PriorKind,
    /// Upper clamp for the adaptive prior exponent.
    pub alpha_max: f64,
}

impl Default for FsrParams {
    fn default() -> Self {
        FsrParams {
            rho_hat: 0.7,
            delta: 0.5,
            gamma: 0.5,
            tau: 2.0,
            block_size: 4,
            border: 14,
            iterations: 100,
            prior: PriorKind::Adaptive,
            alpha_max: 32.0,
        }
    }
}

impl FsrParams {
    pub fn with_prior(mut self, prior: PriorKind) -> Self {
        self.prior = prior;
        self
    }

    /// Side length of the extrapolation area.
    pub fn area_size(&self) -> usize {
        self.block_size + 2 * self.border
    }

    pub fn validate(&self) -> Result<()> {
        fn unit_interval(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(FsrError::param(format!(
                    "{name} must lie in (0, 1], got {v}"
                )))
            }
        }
        unit_interval("rho_hat", self.rho_hat)?;
        unit_interval("delta", self.delta)?;
        unit_interval("gamma", self.gamma)?;
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(FsrError::param(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if !(self.alpha_max > 0.0 && self.alpha_max.is_finite()) {
            return Err(FsrError::param(format!(
                "alpha_max must be positive, got {}",
                self.alpha_max
            )));
        }
        if self.block_size == 0 {
            return Err(FsrError::param("block_size must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(FsrError::param("iterations must be at least 1"));
        }
        if !self.area_size().is_multiple_of(2) {
            return Err(FsrError::param(format!(
                "area size block_size + 2*border = {} must be even",
                self.area_size()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = FsrParams::default();
        p.validate().unwrap();
        assert_eq!(p.area_size(), 32);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = [
            FsrParams {
                rho_hat: 0.0,
                ..Default::default()
            },
            FsrParams {
                delta: 1.5,
                ..Default::default()
            },
            FsrParams {
                gamma: -0.1,
                ..Default::default()
            },
            FsrParams {
                tau: 0.0,
                ..Default::default()
            },
            FsrParams {
                iterations: 0,
                ..Default::default()
            },
            FsrParams {
                block_size: 3,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(
                matches!(p.validate(), Err(FsrError::InvalidParameter(_))),
                "{p:?}"
            );
        }
    }

    #[test]
    fn prior_kind_parses() {
        assert_eq!("OTF".parse::<PriorKind>().unwrap(), PriorKind::Otf);
        assert_eq!(
            "adaptive".parse::<PriorKind>().unwrap(),
            PriorKind::Adaptive
        );
        assert!("foo".parse::<PriorKind>().is_err());
    }
}
