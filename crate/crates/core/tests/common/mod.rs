//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use statrs::distribution::{ContinuousCDF, Normal};

use smalldev::process::{sample_brownian, RangeStats};
use smalldev::rng::{ModuleTag, Stream, StreamId};

/// `P(sup_{[0,1]}|W| ≤ a)` by the reflection principle:
/// `Σ_k (-1)^k [Φ((2k+1)a) - Φ((2k-1)a)]` over all integers `k`.
pub fn reflection_bm_smalldev(a: f64) -> f64 {
    // Pairing k with -k and using survival functions avoids cancellation near 1.
    let n = Normal::standard();
    let sf = |x: f64| n.sf(x);
    let mut p = 1.0 - 2.0 * sf(a);
    for k in 1..60 {
        let s = if k % 2 == 0 { 2.0 } else { -2.0 };
        p += s * (sf((2 * k - 1) as f64 * a) - sf((2 * k + 1) as f64 * a));
    }
    p.max(0.0)
}

/// Minimal cover by exhaustive search over intervals `[p, p + 2ε]` anchored at points of the set.
pub fn brute_force_cover(points: &[f64], eps: f64) -> usize {
    let n = points.len();
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if points
                .iter()
                .all(|&p| idx.iter().any(|&j| p >= points[j] && p - points[j] <= 2.0 * eps))
            {
                return k;
            }
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    n
}

/// `P(sup_t |X(Y(t))| ≤ ε)` for independent Brownian X (two-sided) and Y, by
/// conditioning on the range `[N, M]` of Y: the two branches of X give
/// `F(ε/√M) F(ε/√|N|)` with `F` the Brownian small-ball function.
pub fn conditional_bm_of_bm(eps: &[f64], inner_paths: u64, grid: usize, seed: u64) -> Vec<f64> {
    let mut acc = vec![0.0; eps.len()];
    for r in 0..inner_paths {
        let mut st = Stream::new(seed, StreamId::new(r, ModuleTag::Sampler));
        let y = sample_brownian(grid, 1.0, &mut st).unwrap();
        let rs = RangeStats::from_values(&y.values);
        for (a, &e) in acc.iter_mut().zip(eps) {
            let f = |len: f64| {
                if len > 0.0 {
                    reflection_bm_smalldev(e / len.sqrt())
                } else {
                    1.0
                }
            };
            *a += f(rs.sup_val) * f(-rs.inf_val);
        }
    }
    acc.iter().map(|a| a / inner_paths as f64).collect()
}

/// Unweighted least-squares slope of `log(-log p)` on `log(1/ε)`.
pub fn loglog_slope(eps: &[f64], p: &[f64]) -> f64 {
    let x: Vec<f64> = eps.iter().map(|e| -e.ln()).collect();
    let y: Vec<f64> = p.iter().map(|q| (-q.ln()).ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
