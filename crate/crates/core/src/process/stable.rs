//! Strictly stable Lévy processes via the Chambers–Mallows–Stuck construction.
//!
//! Symmetric laws use characteristic function `exp(-|u|^alpha)` per unit time, so
//! alpha = 2 has variance 2; [`StableSampler::normalized`] rescales that case to
//! standard Brownian motion. Subordinators (alpha < 1) use Laplace transform
//! `E exp(-lambda S) = exp(-lambda^alpha)` (Kanter's form).

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{check_alpha, check_grid, PathSample, UniformGrid};
use crate::error::{param, Result};
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StableMode {
    Symmetric,
    Subordinator,
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return FRAC_PI_2 * (2.0 * u - 1.0);
        }
    }
}

/// One draw of the symmetric alpha-stable law with `E exp(iuX) = exp(-|u|^alpha)`.
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = uniform_angle(rng);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    if alpha == 2.0 {
        return 2.0 * v.sin() * w.sqrt();
    }
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// One draw of the positive alpha-stable law (`0 < alpha < 1`) with
/// `E exp(-lambda S) = exp(-lambda^alpha)`.
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = uniform_angle(rng);
    let w: f64 = Exp1.sample(rng);
    let shifted = v + FRAC_PI_2;
    let s = (alpha * shifted).sin() / v.cos().powf(1.0 / alpha)
        * ((v - alpha * shifted).cos() / w).powf((1.0 - alpha) / alpha);
    s.max(0.0)
}

/// Reusable stable-process sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSampler {
    pub alpha: f64,
    pub mode: StableMode,
    /// Multiplies the unit-time scale; `1/sqrt(2)` when alpha = 2 is normalized to BM.
    pub scale: f64,
}

impl StableSampler {
    pub fn new(alpha: f64, mode: StableMode) -> Result<Self> {
        check_alpha(alpha)?;
        if mode == StableMode::Subordinator && !(alpha < 1.0) {
            return Err(param(
                "alpha",
                format!("subordinator needs alpha in (0,1), got {alpha}"),
            ));
        }
        Ok(Self {
            alpha,
            mode,
            scale: 1.0,
        })
    }

    /// When `normalize` is set and alpha = 2, scale to unit variance per unit time.
    pub fn normalized(mut self, normalize: bool) -> Self {
        if normalize && self.alpha == 2.0 {
            self.scale = std::f64::consts::FRAC_1_SQRT_2;
        }
        self
    }

    /// One increment over a time step `dt`, i.e. `dt^(1/alpha)` times a unit draw.
    pub fn increment<R: Rng + ?Sized>(&self, rng: &mut R, dt: f64) -> f64 {
        let unit = match self.mode {
            StableMode::Symmetric => symmetric_stable(self.alpha, rng),
            StableMode::Subordinator => positive_stable(self.alpha, rng),
        };
        self.scale * dt.powf(1.0 / self.alpha) * unit
    }

    pub fn fill_path<R: Rng + ?Sized>(&self, rng: &mut R, step: f64, out: &mut [f64]) {
        let factor = self.scale * step.powf(1.0 / self.alpha);
        let mut level = 0.0;
        if let Some(first) = out.first_mut() {
            *first = 0.0;
        }
        for v in out.iter_mut().skip(1) {
            let unit = match self.mode {
                StableMode::Symmetric => symmetric_stable(self.alpha, rng),
                StableMode::Subordinator => positive_stable(self.alpha, rng),
            };
            level += factor * unit;
            *v = level;
        }
    }

    pub fn sample(&self, n_points: usize, horizon: f64, stream: &mut Stream) -> Result<PathSample> {
        check_grid(n_points, horizon)?;
        let grid = UniformGrid::on_interval(horizon, n_points);
        let mut values = vec![0.0; n_points];
        self.fill_path(&mut stream.rng, grid.step, &mut values);
        Ok(PathSample::new(grid, values, Some(stream.provenance)))
    }
}

/// Strictly alpha-stable Lévy path on `[0, horizon]` with unit scale.
pub fn sample_stable(
    alpha: f64,
    mode: StableMode,
    n_points: usize,
    horizon: f64,
    stream: &mut Stream,
) -> Result<PathSample> {
    StableSampler::new(alpha, mode)?.sample(n_points, horizon, stream)
}
