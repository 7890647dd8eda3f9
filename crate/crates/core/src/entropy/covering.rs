use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::exec::Workers;
use crate::process::ProcessSpec;
use crate::rng::{ModuleTag, ReplicateStreams};
use crate::stats::wilson_99;

/// Default `δ` in `P(N(K, ε) < δ k*)`.
pub const DEFAULT_DELTA: f64 = 0.05;

/// Minimal number of closed intervals of radius `eps` covering `points`.
///
/// Greedy sweep: centre an interval at the leftmost uncovered point plus `eps`.
pub fn covering_number(points: &[f64], eps: f64) -> Result<usize> {
    if points.is_empty() {
        return Err(param("points", "covering needs a nonempty set"));
    }
    if !(eps > 0.0) {
        return Err(param("eps", format!("must be positive, got {eps}")));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(param("points", "must be finite"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(cover_sorted(&sorted, eps))
}

pub(super) fn cover_sorted(sorted: &[f64], eps: f64) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < sorted.len() {
        let centre = sorted[i] + eps;
        count += 1;
        while i < sorted.len() && sorted[i] - centre <= eps {
            i += 1;
        }
    }
    count
}

/// `⌈ε^{-α/(1+α)}⌉`.
pub fn k_star(alpha: f64, eps: f64) -> usize {
    eps.powf(-alpha / (1.0 + alpha)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringProfile {
    pub eps: f64,
    /// Covering number of a single set, or the median over a tail study's samples.
    pub n_cover: usize,
    pub k_star: usize,
    pub sample_count: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub one_sided: bool,
    /// `-log p̂ / k*` when `p̂ > 0`.
    pub c_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringTailConfig {
    pub alpha: f64,
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub n_samples: u64,
    pub grid: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub threads: usize,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringTail {
    pub alpha: f64,
    pub delta: f64,
    pub grid: usize,
    pub profiles: Vec<CoveringProfile>,
}

/// Estimate `P(N(K, ε) < δ k*)` for the sampled range `K` of a symmetric `α`-stable path on `[0,1]`.
pub fn covering_tail(cfg: &CoveringTailConfig) -> Result<CoveringTail> {
    let spec = ProcessSpec::StableSymmetric {
        alpha: cfg.alpha,
        normalize_bm: false,
    };
    spec.validate()?;
    if cfg.eps_grid.is_empty() || cfg.eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(param("eps_grid", "need positive eps values"));
    }
    if !(cfg.delta > 0.0) {
        return Err(param("delta", format!("must be positive, got {}", cfg.delta)));
    }
    if cfg.n_samples == 0 {
        return Err(param("n_samples", "must be positive"));
    }
    let m = cfg.eps_grid.len();
    let thresholds: Vec<f64> = cfg
        .eps_grid
        .iter()
        .map(|&e| cfg.delta * k_star(cfg.alpha, e) as f64)
        .collect();
    let per_rep = Workers::new(cfg.threads).collect(cfg.n_samples, |r| -> Result<Vec<usize>> {
        let streams = ReplicateStreams::new(cfg.master_seed, r, ModuleTag::Entropy);
        let mut path = spec.sample(cfg.grid, 1.0, &mut streams.stream(0, 0))?.values;
        path.sort_by(f64::total_cmp);
        Ok(cfg.eps_grid.iter().map(|&e| cover_sorted(&path, e)).collect())
    });
    let mut counts: Vec<Vec<usize>> = vec![Vec::with_capacity(per_rep.len()); m];
    for rep in per_rep {
        for (j, n) in rep?.into_iter().enumerate() {
            counts[j].push(n);
        }
    }
    let profiles = (0..m)
        .map(|j| {
            let eps = cfg.eps_grid[j];
            let hits = counts[j].iter().filter(|&&n| (n as f64) < thresholds[j]).count() as u64;
            let ci = wilson_99(hits, cfg.n_samples);
            let p_hat = hits as f64 / cfg.n_samples as f64;
            let ks = k_star(cfg.alpha, eps);
            counts[j].sort_unstable();
            CoveringProfile {
                eps,
                n_cover: counts[j][counts[j].len() / 2],
                k_star: ks,
                sample_count: cfg.n_samples,
                hits,
                p_hat,
                ci_low: ci.low,
                ci_high: ci.high,
                one_sided: ci.one_sided,
                c_hat: (p_hat > 0.0).then(|| -p_hat.ln() / ks as f64),
            }
        })
        .collect();
    Ok(CoveringTail {
        alpha: cfg.alpha,
        delta: cfg.delta,
        grid: cfg.grid,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_examples() {
        assert_eq!(covering_number(&[0.0], 1e-9).unwrap(), 1);
        assert_eq!(covering_number(&[0.0, 1.0], 0.5).unwrap(), 1);
        assert_eq!(covering_number(&[0.0, 1.0], 0.4).unwrap(), 2);
        assert_eq!(covering_number(&[3.0, 0.0, 1.0, 2.0], 0.5).unwrap(), 2);
        assert!(covering_number(&[], 0.5).is_err());
        assert!(covering_number(&[1.0], 0.0).is_err());
    }

    #[test]
    fn k_star_values() {
        assert_eq!(k_star(1.5, 0.1), 4);
        assert_eq!(k_star(1.5, 0.05), 7);
        assert_eq!(k_star(1.5, 0.025), 10);
        assert_eq!(k_star(2.0, 1.0), 1);
    }

    #[test]
    fn huge_delta_makes_event_certain() {
        let cfg = CoveringTailConfig {
            alpha: 1.5,
            eps_grid: vec![0.1],
            delta: 1e6,
            n_samples: 200,
            grid: 256,
            master_seed: 3,
            threads: 0,
        };
        let t = covering_tail(&cfg).unwrap();
        assert_eq!(t.profiles[0].p_hat, 1.0);
        assert_eq!(t.profiles[0].c_hat, Some(0.0));
    }
}
