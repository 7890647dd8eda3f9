//! Exact-in-distribution samplers for the base processes on finite uniform grids.

mod brownian;
mod fbm;
mod stable;

pub use brownian::{fill_brownian, sample_brownian};
pub use fbm::{sample_fbm, sample_fbm_true, true_fbm_grid, FbmMethod, FbmSampler};
pub use stable::{positive_stable, sample_stable, symmetric_stable, StableMode, StableSampler};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::rng::{SeedProvenance, Stream};

/// Declarative description of a process law.
///
/// Brownian motion and the symmetric stable laws are used two-sided (independent
/// copy for negative time) whenever they act as an outer process. `FbmTrue` is the
/// single Gaussian process on the whole line with dependent wings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Brownian,
    FbmTwoSided {
        hurst: f64,
    },
    FbmTrue {
        hurst: f64,
    },
    StableSymmetric {
        alpha: f64,
        /// Rescale alpha = 2 to unit variance per unit time (standard BM).
        #[serde(default)]
        normalize_bm: bool,
    },
    StableSubordinator {
        alpha: f64,
    },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessSpec::Brownian => Ok(()),
            ProcessSpec::FbmTwoSided { hurst } | ProcessSpec::FbmTrue { hurst } => check_hurst(hurst),
            ProcessSpec::StableSymmetric { alpha, .. } => check_alpha(alpha),
            ProcessSpec::StableSubordinator { alpha } => {
                if alpha > 0.0 && alpha < 1.0 {
                    Ok(())
                } else {
                    Err(param(
                        "alpha",
                        format!("subordinator needs alpha in (0,1), got {alpha}"),
                    ))
                }
            }
        }
    }

    /// H for fBM, 1/alpha for stable laws, 1/2 for Brownian motion.
    pub fn self_similarity_index(&self) -> f64 {
        match *self {
            ProcessSpec::Brownian => 0.5,
            ProcessSpec::FbmTwoSided { hurst } | ProcessSpec::FbmTrue { hurst } => hurst,
            ProcessSpec::StableSymmetric { alpha, .. } | ProcessSpec::StableSubordinator { alpha } => 1.0 / alpha,
        }
    }

    /// Paths are continuous (no jumps).
    pub fn is_continuous(&self) -> bool {
        match *self {
            ProcessSpec::Brownian | ProcessSpec::FbmTwoSided { .. } | ProcessSpec::FbmTrue { .. } => true,
            ProcessSpec::StableSymmetric { alpha, .. } => alpha == 2.0,
            ProcessSpec::StableSubordinator { .. } => false,
        }
    }

    /// Stationary independent increments, so values on any finite point set can be drawn exactly.
    pub fn is_levy(&self) -> bool {
        matches!(
            self,
            ProcessSpec::Brownian | ProcessSpec::StableSymmetric { .. } | ProcessSpec::StableSubordinator { .. }
        )
    }

    /// Sample the one-sided process on `[0, horizon]`.
    ///
    /// `FbmTrue` has no one-sided form; its positive wing is an ordinary fBM, which is
    /// what this returns.
    pub fn sample(&self, n_points: usize, horizon: f64, stream: &mut Stream) -> Result<PathSample> {
        self.validate()?;
        match *self {
            ProcessSpec::Brownian => sample_brownian(n_points, horizon, stream),
            ProcessSpec::FbmTwoSided { hurst } | ProcessSpec::FbmTrue { hurst } => {
                sample_fbm(hurst, n_points, horizon, stream)
            }
            ProcessSpec::StableSymmetric { alpha, normalize_bm } => StableSampler::new(alpha, StableMode::Symmetric)?
                .normalized(normalize_bm)
                .sample(n_points, horizon, stream),
            ProcessSpec::StableSubordinator { alpha } => {
                sample_stable(alpha, StableMode::Subordinator, n_points, horizon, stream)
            }
        }
    }
}

pub(crate) fn check_hurst(hurst: f64) -> Result<()> {
    if hurst > 0.0 && hurst < 1.0 {
        Ok(())
    } else {
        Err(param("hurst", format!("must lie in (0,1), got {hurst}")))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(param("alpha", format!("must lie in (0,2], got {alpha}")))
    }
}

pub(crate) fn check_grid(n_points: usize, horizon: f64) -> Result<()> {
    if n_points < 2 {
        return Err(param("n_points", format!("need at least 2 points, got {n_points}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(param("horizon", format!("must be positive and finite, got {horizon}")));
    }
    Ok(())
}

/// Uniform time grid `start + i * step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn on_interval(horizon: f64, n_points: usize) -> Self {
        Self {
            start: 0.0,
            step: horizon / (n_points - 1) as f64,
            len: n_points,
        }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.time(i)).collect()
    }
}

/// One realized trajectory on a uniform grid.
///
/// `origin` is the index of time zero: 0 for one-sided paths, interior for a
/// true-fBM path on `[-a, b]`. The value there is exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    pub origin: usize,
    pub provenance: Option<SeedProvenance>,
}

impl PathSample {
    pub fn new(grid: UniformGrid, values: Vec<f64>, provenance: Option<SeedProvenance>) -> Self {
        debug_assert_eq!(grid.len, values.len());
        Self {
            grid,
            values,
            origin: 0,
            provenance,
        }
    }

    /// The constant-zero path on `[0, horizon]`.
    pub fn zero(n_points: usize, horizon: f64) -> Self {
        Self::new(UniformGrid::on_interval(horizon, n_points), vec![0.0; n_points], None)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn horizon(&self) -> f64 {
        self.grid.end() - self.grid.start
    }

    /// Linear interpolation; `None` outside the grid span.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        interpolate_uniform(self.grid.start, self.grid.step, &self.values, t)
    }
}

pub(crate) fn interpolate_uniform(start: f64, step: f64, values: &[f64], t: f64) -> Option<f64> {
    let n = values.len();
    let x = (t - start) / step;
    let last = (n - 1) as f64;
    if !(x >= -1e-9 && x <= last + 1e-9) {
        return None;
    }
    let x = x.clamp(0.0, last);
    let i = (x.floor() as usize).min(n.saturating_sub(2));
    let frac = x - i as f64;
    if n == 1 {
        return Some(values[0]);
    }
    Some(values[i] + frac * (values[i + 1] - values[i]))
}

/// Extremes of a path: `N = inf`, `M = sup`, and derived norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeStats {
    pub inf_val: f64,
    pub sup_val: f64,
    pub range: f64,
    pub sup_abs: f64,
    /// `sup_{s,t} |Y(t) - Y(s)|`, equal to `range` for a scalar path.
    pub sup_increment: f64,
}

impl RangeStats {
    pub fn from_values(values: &[f64]) -> Self {
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        Self::from_extremes(lo, hi)
    }

    pub fn from_extremes(inf_val: f64, sup_val: f64) -> Self {
        let range = sup_val - inf_val;
        Self {
            inf_val,
            sup_val,
            range,
            sup_abs: inf_val.abs().max(sup_val.abs()),
            sup_increment: range,
        }
    }
}

pub fn range_stats(path: &PathSample) -> RangeStats {
    RangeStats::from_values(&path.values)
}

pub(crate) fn standard_normals<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    use rand_distr::{Distribution, StandardNormal};
    for x in out.iter_mut() {
        *x = StandardNormal.sample(rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(values: Vec<f64>) -> PathSample {
        let n = values.len();
        PathSample::new(UniformGrid::on_interval(1.0, n), values, None)
    }

    #[test]
    fn range_stats_small_example() {
        let s = range_stats(&path(vec![0.0, 1.0, -2.0]));
        assert_eq!(s.inf_val, -2.0);
        assert_eq!(s.sup_val, 1.0);
        assert_eq!(s.range, 3.0);
        assert_eq!(s.sup_abs, 2.0);
        assert_eq!(s.sup_increment, 3.0);
    }

    #[test]
    fn range_stats_zero_path() {
        let s = range_stats(&PathSample::zero(17, 1.0));
        assert_eq!(s, RangeStats::from_extremes(0.0, 0.0));
        assert_eq!(s.range, 0.0);
        assert_eq!(s.sup_abs, 0.0);
    }

    #[test]
    fn interpolation_hits_grid_values_and_rejects_outside() {
        let p = path(vec![0.0, 2.0, -2.0]);
        assert_eq!(p.interpolate(0.5), Some(2.0));
        assert_eq!(p.interpolate(0.25), Some(1.0));
        assert_eq!(p.interpolate(1.0), Some(-2.0));
        assert_eq!(p.interpolate(1.5), None);
        assert_eq!(p.interpolate(-0.1), None);
    }

    #[test]
    fn spec_validation() {
        assert!(ProcessSpec::FbmTwoSided { hurst: 1.0 }.validate().is_err());
        assert!(ProcessSpec::StableSymmetric {
            alpha: 2.5,
            normalize_bm: false
        }
        .validate()
        .is_err());
        assert!(ProcessSpec::StableSubordinator { alpha: 1.0 }.validate().is_err());
        assert!(ProcessSpec::StableSubordinator { alpha: 0.5 }.validate().is_ok());
        assert_eq!(
            ProcessSpec::StableSymmetric {
                alpha: 1.5,
                normalize_bm: false
            }
            .self_similarity_index(),
            1.0 / 1.5
        );
        assert_eq!(ProcessSpec::FbmTrue { hurst: 0.3 }.self_similarity_index(), 0.3);
    }
}
