use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::estimator::fit_points;
use crate::exec::Workers;
use crate::process::{PathSample, ProcessSpec, RangeStats};
use crate::rng::{ModuleTag, ReplicateStreams};
use crate::stats::wilson_99;

const MAX_BINS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalTimeEstimate {
    pub bin_width: f64,
    /// Estimate of `L* = sup_x L(x)`.
    pub l_star_hat: f64,
    pub occupation_total: f64,
}

/// `n^{-1/3}` times the path range (or `n^{-1/3}` for a constant path).
pub fn default_bin_width(n_points: usize, range: f64) -> f64 {
    let scale = if range > 0.0 { range } else { 1.0 };
    (n_points as f64).powf(-1.0 / 3.0) * scale
}

/// Occupation-density estimate: each grid interval contributes its length to the
/// value bin of its midpoint; `L*` is the largest bin mass over the bin width.
pub fn local_time_max(path: &PathSample, bin_width: f64) -> Result<LocalTimeEstimate> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(param("bin_width", format!("must be positive, got {bin_width}")));
    }
    let v = &path.values;
    if v.len() < 2 {
        return Err(param("path", "need at least two points"));
    }
    let bin = |i: usize| (0.5 * (v[i] + v[i + 1]) / bin_width).floor() as i64;
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for i in 0..v.len() - 1 {
        let b = bin(i);
        lo = lo.min(b);
        hi = hi.max(b);
    }
    let n_bins = (hi - lo) as usize + 1;
    if n_bins > MAX_BINS {
        return Err(param("bin_width", format!("{n_bins} bins exceed the limit {MAX_BINS}")));
    }
    let mut counts = vec![0u64; n_bins];
    for i in 0..v.len() - 1 {
        counts[(bin(i) - lo) as usize] += 1;
    }
    let total: u64 = counts.iter().sum();
    let max = counts.iter().copied().max().unwrap_or(0);
    let dt = path.grid.step;
    Ok(LocalTimeEstimate {
        bin_width,
        l_star_hat: max as f64 * dt / bin_width,
        occupation_total: total as f64 * dt,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaceyConfig {
    pub alpha: f64,
    pub u_grid: Vec<f64>,
    pub n_samples: u64,
    pub grid: usize,
    /// Fixed bin width; `None` uses [`default_bin_width`] per path.
    #[serde(default)]
    pub bin_width: Option<f64>,
    pub master_seed: u64,
    #[serde(default)]
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaceyResult {
    pub alpha: f64,
    pub u_grid: Vec<f64>,
    pub hits: Vec<u64>,
    pub p_hat: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// Points inside the fit window (`0 < p̂ ≤ 1/2`).
    pub used: Vec<bool>,
    pub n_samples: u64,
    /// Fitted `a` in `-log P(L* > u) ≈ c u^a`.
    pub slope: f64,
    pub slope_stderr: f64,
    pub median_l_star: f64,
}

/// Sample `α`-stable paths (`α = 2` is standard BM), estimate `P(L* > u)` and fit the tail exponent.
pub fn lacey_tail_check(cfg: &LaceyConfig) -> Result<LaceyResult> {
    if !(cfg.alpha > 1.0 && cfg.alpha <= 2.0) {
        return Err(param(
            "alpha",
            format!("local times need alpha in (1,2], got {}", cfg.alpha),
        ));
    }
    if cfg.u_grid.is_empty() || cfg.u_grid.iter().any(|u| !(*u > 0.0)) {
        return Err(param("u_grid", "need positive levels"));
    }
    if cfg.n_samples == 0 {
        return Err(param("n_samples", "must be positive"));
    }
    let spec = ProcessSpec::StableSymmetric {
        alpha: cfg.alpha,
        normalize_bm: true,
    };
    let l_stars = Workers::new(cfg.threads).collect(cfg.n_samples, |r| -> Result<f64> {
        let streams = ReplicateStreams::new(cfg.master_seed, r, ModuleTag::Entropy);
        let path = spec.sample(cfg.grid, 1.0, &mut streams.stream(0, 0))?;
        let width = match cfg.bin_width {
            Some(w) => w,
            None => default_bin_width(cfg.grid, RangeStats::from_values(&path.values).range),
        };
        Ok(local_time_max(&path, width)?.l_star_hat)
    });
    let mut l_stars: Vec<f64> = l_stars.into_iter().collect::<Result<_>>()?;
    let n = cfg.n_samples;
    let hits: Vec<u64> = cfg
        .u_grid
        .iter()
        .map(|&u| l_stars.iter().filter(|&&l| l > u).count() as u64)
        .collect();
    let p_hat: Vec<f64> = hits.iter().map(|&h| h as f64 / n as f64).collect();
    let cis: Vec<_> = hits.iter().map(|&h| wilson_99(h, n)).collect();
    let used: Vec<bool> = p_hat.iter().map(|&p| p > 0.0 && p <= 0.5).collect();
    let (inv_u, ps): (Vec<f64>, Vec<f64>) = cfg
        .u_grid
        .iter()
        .zip(&p_hat)
        .zip(&used)
        .filter(|(_, &k)| k)
        .map(|((&u, &p), _)| (1.0 / u, p))
        .unzip();
    let fit = fit_points(&inv_u, &ps, n, None).map_err(|e| {
        Error::Fit(format!(
            "insufficient tail hits ({e}); lower the u grid into the range where 0 < P(L* > u) <= 1/2"
        ))
    })?;
    l_stars.sort_by(f64::total_cmp);
    Ok(LaceyResult {
        alpha: cfg.alpha,
        u_grid: cfg.u_grid.clone(),
        hits,
        p_hat,
        ci_low: cis.iter().map(|c| c.low).collect(),
        ci_high: cis.iter().map(|c| c.high).collect(),
        used,
        n_samples: n,
        slope: fit.exponent_hat,
        slope_stderr: fit.exponent_stderr,
        median_l_star: l_stars[l_stars.len() / 2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_path_puts_all_mass_in_one_bin() {
        let p = PathSample::zero(101, 1.0);
        let lt = local_time_max(&p, 0.25).unwrap();
        assert!((lt.occupation_total - 1.0).abs() < 1e-12);
        assert!((lt.l_star_hat - 4.0).abs() < 1e-12);
        assert!(local_time_max(&p, 0.0).is_err());
    }

    #[test]
    fn linear_path_has_flat_density() {
        let mut p = PathSample::zero(1001, 1.0);
        for (i, v) in p.values.iter_mut().enumerate() {
            *v = i as f64 / 1000.0;
        }
        let lt = local_time_max(&p, 0.1).unwrap();
        assert!((lt.l_star_hat - 1.0).abs() < 0.02, "{lt:?}");
    }

    #[test]
    fn lacey_rejects_bad_alpha() {
        let cfg = LaceyConfig {
            alpha: 0.8,
            u_grid: vec![1.0],
            n_samples: 10,
            grid: 64,
            bin_width: None,
            master_seed: 1,
            threads: 0,
        };
        assert!(lacey_tail_check(&cfg).is_err());
    }
}
