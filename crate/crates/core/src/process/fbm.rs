//! Fractional Brownian motion.
//!
//! The one-sided sampler draws fractional Gaussian noise by circulant embedding
//! (Davies–Harte) of the increment autocovariance and falls back to a dense
//! Cholesky factor when the embedding spectrum is negative beyond tolerance.
//! The "true" fBM on `[-a, b]` is drawn from its covariance directly.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{check_grid, check_hurst, standard_normals, PathSample, UniformGrid};
use crate::error::{param, Error, Result};
use crate::rng::Stream;

/// Relative tolerance for negative circulant eigenvalues; smaller negatives are clamped.
pub const EMBEDDING_TOLERANCE: f64 = 1e-9;
/// Largest grid handed to the dense Cholesky fallback.
pub const CHOLESKY_MAX_POINTS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbmMethod {
    Circulant,
    Cholesky,
}

enum Kernel {
    Circulant { sqrt_eig: Vec<f64>, fft: Arc<dyn Fft<f64>> },
    Cholesky { lower: DMatrix<f64> },
}

/// Reusable fBM sampler for a fixed Hurst index and grid size.
pub struct FbmSampler {
    hurst: f64,
    n_points: usize,
    kernel: Kernel,
}

/// Autocovariance of unit-step fractional Gaussian noise at integer lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Covariance of the two-sided ("true") fBM: `(|s|^2H + |t|^2H - |t-s|^2H) / 2`.
pub fn true_fbm_covariance(hurst: f64, s: f64, t: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * (s.abs().powf(h2) + t.abs().powf(h2) - (t - s).abs().powf(h2))
}

impl FbmSampler {
    /// Circulant embedding, or Cholesky when the embedding is not nonnegative definite.
    pub fn new(hurst: f64, n_points: usize) -> Result<Self> {
        match Self::with_method(hurst, n_points, FbmMethod::Circulant) {
            Ok(s) => Ok(s),
            Err(Error::Simulation(_)) if n_points <= CHOLESKY_MAX_POINTS => {
                Self::with_method(hurst, n_points, FbmMethod::Cholesky)
            }
            Err(e) => Err(e),
        }
    }

    pub fn with_method(hurst: f64, n_points: usize, method: FbmMethod) -> Result<Self> {
        check_hurst(hurst)?;
        if n_points < 2 {
            return Err(param("n_points", format!("need at least 2 points, got {n_points}")));
        }
        let n_inc = n_points - 1;
        let kernel = match method {
            FbmMethod::Circulant => circulant_kernel(hurst, n_inc)?,
            FbmMethod::Cholesky => {
                if n_points > CHOLESKY_MAX_POINTS {
                    return Err(Error::Simulation(format!(
                        "Cholesky fallback limited to {CHOLESKY_MAX_POINTS} points, got {n_points}"
                    )));
                }
                let cov = DMatrix::from_fn(n_inc, n_inc, |i, j| fgn_autocovariance(hurst, i.abs_diff(j)));
                let lower = cholesky_with_jitter(cov)?;
                Kernel::Cholesky { lower }
            }
        };
        Ok(Self {
            hurst,
            n_points,
            kernel,
        })
    }

    pub fn method(&self) -> FbmMethod {
        match self.kernel {
            Kernel::Circulant { .. } => FbmMethod::Circulant,
            Kernel::Cholesky { .. } => FbmMethod::Cholesky,
        }
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Fill `out` (length `n_points`) with an fBM path on the grid `i * step`.
    pub fn fill_path<R: Rng + ?Sized>(&self, rng: &mut R, step: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.n_points, "output length must match sampler grid");
        let n_inc = self.n_points - 1;
        let scale = step.powf(self.hurst);
        out[0] = 0.0;
        match &self.kernel {
            Kernel::Circulant { sqrt_eig, fft } => {
                let m = sqrt_eig.len();
                let mut z = vec![0.0; 2 * m];
                standard_normals(rng, &mut z);
                let mut w: Vec<Complex<f64>> = sqrt_eig
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| Complex::new(s * z[2 * k], s * z[2 * k + 1]))
                    .collect();
                fft.process(&mut w);
                let mut level = 0.0;
                for (o, c) in out[1..].iter_mut().zip(&w[..n_inc]) {
                    level += scale * c.re;
                    *o = level;
                }
            }
            Kernel::Cholesky { lower } => {
                let mut z = vec![0.0; n_inc];
                standard_normals(rng, &mut z);
                let inc = lower * DVector::from_vec(z);
                let mut level = 0.0;
                for (o, dx) in out[1..].iter_mut().zip(inc.iter()) {
                    level += scale * dx;
                    *o = level;
                }
            }
        }
    }

    pub fn sample(&self, horizon: f64, stream: &mut Stream) -> Result<PathSample> {
        check_grid(self.n_points, horizon)?;
        let grid = UniformGrid::on_interval(horizon, self.n_points);
        let mut values = vec![0.0; self.n_points];
        self.fill_path(&mut stream.rng, grid.step, &mut values);
        Ok(PathSample::new(grid, values, Some(stream.provenance)))
    }

    /// True fBM on the grid `(i - origin) * step`, `i = 0..n_points`.
    ///
    /// Draws one-sided fBM `B` on the whole grid and re-centres it at the origin:
    /// `X(t) = B(t + a) - B(a)` has exactly the two-sided covariance by stationarity
    /// of increments.
    pub fn fill_true<R: Rng + ?Sized>(&self, rng: &mut R, step: f64, origin: usize, out: &mut [f64]) {
        self.fill_path(rng, step, out);
        let shift = out[origin];
        for v in out.iter_mut() {
            *v -= shift;
        }
        out[origin] = 0.0;
    }
}

fn circulant_kernel(hurst: f64, n_inc: usize) -> Result<Kernel> {
    let m = 2 * n_inc;
    let mut row: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    for (k, r) in row.iter_mut().take(n_inc + 1).enumerate() {
        *r = Complex::new(fgn_autocovariance(hurst, k), 0.0);
    }
    for k in 1..n_inc {
        row[m - k] = row[k];
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let max = row.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
    let min = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    if min < -EMBEDDING_TOLERANCE * max {
        return Err(Error::Simulation(format!(
            "circulant embedding has negative eigenvalue {min:e} (max {max:e}) for H = {hurst}, n = {n_inc}"
        )));
    }
    let sqrt_eig = row.iter().map(|c| (c.re.max(0.0) / m as f64).sqrt()).collect();
    Ok(Kernel::Circulant { sqrt_eig, fft })
}

fn cholesky_with_jitter(cov: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let diag_max = cov
        .diagonal()
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for jitter in [0.0, 1e-12, 1e-10, 1e-8] {
        let mut m = cov.clone();
        if jitter > 0.0 {
            for i in 0..m.nrows() {
                m[(i, i)] += jitter * diag_max;
            }
        }
        if let Some(ch) = m.cholesky() {
            return Ok(ch.l());
        }
    }
    Err(Error::Simulation(
        "covariance matrix is not positive semidefinite after jitter".into(),
    ))
}

/// fBM on `n_points` equally spaced times in `[0, horizon]`.
pub fn sample_fbm(hurst: f64, n_points: usize, horizon: f64, stream: &mut Stream) -> Result<PathSample> {
    check_grid(n_points, horizon)?;
    FbmSampler::new(hurst, n_points)?.sample(horizon, stream)
}

/// Grid with `n_points` points that contains 0 and covers `[-neg_extent, pos_extent]`.
/// Returns the grid and the index of the origin.
pub fn true_fbm_grid(neg_extent: f64, pos_extent: f64, n_points: usize) -> Result<(UniformGrid, usize)> {
    if !(neg_extent >= 0.0 && pos_extent >= 0.0 && neg_extent + pos_extent > 0.0) {
        return Err(param(
            "extent",
            format!("need nonnegative extents with positive sum, got [{neg_extent}, {pos_extent}]"),
        ));
    }
    let both = neg_extent > 0.0 && pos_extent > 0.0;
    if n_points < if both { 3 } else { 2 } {
        return Err(param(
            "n_points",
            format!("too few points ({n_points}) for a grid containing 0"),
        ));
    }
    let (step, k_neg) = if !both {
        let step = (neg_extent + pos_extent) / (n_points - 1) as f64;
        let k_neg = if neg_extent > 0.0 { n_points - 1 } else { 0 };
        (step, k_neg)
    } else {
        // Smallest step over all placements of the origin.
        (1..n_points - 1)
            .map(|k| ((neg_extent / k as f64).max(pos_extent / (n_points - 1 - k) as f64), k))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("at least one interior index")
    };
    Ok((
        UniformGrid {
            start: -(k_neg as f64) * step,
            step,
            len: n_points,
        },
        k_neg,
    ))
}

/// Gaussian path on a grid of `[-neg_extent, pos_extent]` containing 0 whose
/// covariance is the two-sided fBM covariance, by dense Cholesky factorization.
pub fn sample_fbm_true(
    hurst: f64,
    neg_extent: f64,
    pos_extent: f64,
    n_points: usize,
    stream: &mut Stream,
) -> Result<PathSample> {
    check_hurst(hurst)?;
    if n_points > CHOLESKY_MAX_POINTS {
        return Err(param(
            "n_points",
            format!("dense construction limited to {CHOLESKY_MAX_POINTS} points, got {n_points}"),
        ));
    }
    let (grid, origin) = true_fbm_grid(neg_extent, pos_extent, n_points)?;
    let others: Vec<f64> = (0..n_points).filter(|&i| i != origin).map(|i| grid.time(i)).collect();
    let d = others.len();
    let cov = DMatrix::from_fn(d, d, |i, j| true_fbm_covariance(hurst, others[i], others[j]));
    let lower = cholesky_with_jitter(cov)?;
    let mut z = vec![0.0; d];
    standard_normals(&mut stream.rng, &mut z);
    let x = lower * DVector::from_vec(z);
    let mut values = Vec::with_capacity(n_points);
    values.extend(x.iter().take(origin));
    values.push(0.0);
    values.extend(x.iter().skip(origin));
    Ok(PathSample {
        grid,
        values,
        origin,
        provenance: Some(stream.provenance),
    })
}
