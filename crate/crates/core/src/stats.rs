//! Binomial confidence intervals and weighted linear regression.

use serde::{Deserialize, Serialize};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;
/// One-sided 99% standard normal quantile.
pub const Z_99_ONE_SIDED: f64 = 2.326_347_874_040_841;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    /// Zero successes: the interval is the one-sided upper bound `[0, high]`.
    pub one_sided: bool,
}

/// Wilson score interval at 99% for `hits` successes in `n` trials.
pub fn wilson_99(hits: u64, n: u64) -> Interval {
    if n == 0 {
        return Interval {
            low: 0.0,
            high: 1.0,
            one_sided: false,
        };
    }
    let nf = n as f64;
    if hits == 0 {
        let z2 = Z_99_ONE_SIDED * Z_99_ONE_SIDED;
        return Interval {
            low: 0.0,
            high: z2 / (nf + z2),
            one_sided: true,
        };
    }
    let p = hits as f64 / nf;
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z_99 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Interval {
        low: (centre - half).clamp(0.0, p),
        high: (centre + half).clamp(p, 1.0),
        one_sided: false,
    }
}

/// Weighted least squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r_squared: f64,
}

/// Fit with weights `w_i = 1/Var(y_i)`. Standard errors use the known variances,
/// inflated by the residual scale when the fit is worse than they imply.
pub fn weighted_line(x: &[f64], y: &[f64], w: &[f64]) -> Option<LineFit> {
    let m = x.len();
    if m < 2 || y.len() != m || w.len() != m {
        return None;
    }
    let sw: f64 = w.iter().sum();
    let xb = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let yb = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let (dx, dy) = (x[i] - xb, y[i] - yb);
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = yb - slope * xb;
    let chi2: f64 = (0..m).map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2)).sum();
    let scale = if m > 2 { (chi2 / (m - 2) as f64).max(1.0) } else { 1.0 };
    let slope_var = scale / sxx;
    let intercept_var = scale * (1.0 / sw + xb * xb / sxx);
    let r_squared = if syy > 0.0 {
        (1.0 - chi2 / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(LineFit {
        intercept,
        slope,
        slope_stderr: slope_var.sqrt(),
        intercept_stderr: intercept_var.sqrt(),
        r_squared,
    })
}
