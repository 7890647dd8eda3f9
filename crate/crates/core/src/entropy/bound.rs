use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::covering::{cover_sorted, covering_number};
use crate::asymptotics::{alpha_time_exponent, AsymptoticLaw, NormKind};
use crate::composition::{levy_at_points, Composer, IterationChain};
use crate::error::{param, Error, Result};
use crate::estimator::{tally_into, verify_prediction, SmallDevCurve, TolerancePolicy, Verdict};
use crate::exec::Workers;
use crate::process::ProcessSpec;
use crate::rng::{ModuleTag, ReplicateStreams};

/// `P(|X| ≤ x)` for the symmetric `β`-stable law with characteristic function
/// `exp(-|u|^β)`, from `(2/π) ∫_0^∞ sin(ux)/u · exp(-u^β) du`.
pub fn stable_abs_cdf(beta: f64, x: f64) -> Result<f64> {
    crate::process::check_alpha(beta)?;
    if x.is_nan() || x < 0.0 {
        return Err(param("x", format!("must be nonnegative, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    // Integrate in s = u^β when β < 1 so the integrand is smooth at 0.
    let (f, upper): (Box<dyn Fn(f64) -> f64>, f64) = if beta < 1.0 {
        let p = 1.0 / beta;
        (
            Box::new(move |s: f64| {
                if s == 0.0 {
                    if p > 1.0 {
                        0.0
                    } else {
                        x
                    }
                } else {
                    p * (x * s.powf(p)).sin() * (-s).exp() / s
                }
            }),
            40.0,
        )
    } else {
        (
            Box::new(move |u: f64| {
                if u == 0.0 {
                    x
                } else {
                    (u * x).sin() / u * (-u.powf(beta)).exp()
                }
            }),
            40f64.powf(1.0 / beta),
        )
    };
    // Highest oscillation frequency over the interval sets the resolution.
    let freq = if beta < 1.0 {
        x * upper.powf(1.0 / beta)
    } else {
        x * upper
    };
    let n = ((freq * upper / (2.0 * PI) * 64.0).ceil() as usize).clamp(20_000, 40_000_000) & !1;
    let h = upper / n as f64;
    let mut sum = f(0.0) + f(upper);
    for i in 1..n {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok((2.0 / PI * sum * h / 3.0).clamp(0.0, 1.0))
}

/// Scale factor of a spec relative to the `exp(-|u|^β)` normalization.
fn stable_scale(spec: &ProcessSpec) -> Result<(f64, f64)> {
    match *spec {
        ProcessSpec::Brownian => Ok((2.0, std::f64::consts::FRAC_1_SQRT_2)),
        ProcessSpec::StableSymmetric { alpha, normalize_bm } => {
            let s = if normalize_bm && alpha == 2.0 {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                1.0
            };
            Ok((alpha, s))
        }
        _ => Err(param(
            "outer",
            "entropy bound needs a symmetric stable or Brownian outer process",
        )),
    }
}

/// Smallest `c₀` with `sup_{t ≥ c₀} P(|X(t)| ≤ 2) ≤ e^{-1}` for the outer process `spec`.
///
/// By self-similarity `P(|X(t)| ≤ 2) = P(|X(1)| ≤ 2 t^{-1/β})` decreases in `t`,
/// so `c₀ = (2/q)^β` with `P(|X(1)| ≤ q) = e^{-1}`.
pub fn calibrate_c0(spec: &ProcessSpec) -> Result<f64> {
    let (beta, scale) = stable_scale(spec)?;
    let target = (-1.0f64).exp();
    let (mut lo, mut hi) = (0.0, 1.0);
    while stable_abs_cdf(beta, hi)? < target {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if stable_abs_cdf(beta, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = scale * 0.5 * (lo + hi);
    Ok((2.0 / q).powf(beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBoundVerdict {
    pub eps: f64,
    pub n_cover: usize,
    /// Monte Carlo `P(sup_{t∈K} |X(t)| ≤ ε)`.
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// `min(1, e^{1 - N(K, c₀ ε^β)})`.
    pub rhs: f64,
    pub pass: bool,
}

/// Check `P(sup_{t∈K}|X(t)| ≤ ε) ≤ e^{1 - N(K, c₀ε^β)}` by drawing `X` exactly on `K`.
pub fn entropy_upper_bound_check(
    outer: &ProcessSpec,
    c0: f64,
    points: &[f64],
    eps: f64,
    n_samples: u64,
    master_seed: u64,
    threads: usize,
) -> Result<EntropyBoundVerdict> {
    let (beta, _) = stable_scale(outer)?;
    if !(c0 > 0.0) {
        return Err(param("c0", format!("must be positive, got {c0}")));
    }
    if n_samples == 0 {
        return Err(param("n_samples", "must be positive"));
    }
    let n_cover = covering_number(points, c0 * eps.powf(beta))?;
    let rhs = (1.0 - n_cover as f64).exp().min(1.0);
    let hits: u64 = Workers::new(threads).run(
        n_samples,
        || Ok(0u64),
        |acc: &mut Result<u64>, r| {
            if let Ok(h) = acc {
                let streams = ReplicateStreams::new(master_seed, r, ModuleTag::Outer);
                let mut x = points.to_vec();
                match levy_at_points(outer, &mut x, &mut streams.stream(0, 0), &mut streams.stream(0, 1)) {
                    Ok(()) => *h += x.iter().all(|v| v.abs() <= eps) as u64,
                    Err(e) => *acc = Err(e),
                }
            }
        },
        |a, b| Ok(a? + b?),
    )?;
    let lhs = hits as f64 / n_samples as f64;
    let lhs_stderr = (lhs * (1.0 - lhs) / n_samples as f64).sqrt();
    Ok(EntropyBoundVerdict {
        eps,
        n_cover,
        lhs,
        lhs_stderr,
        rhs,
        pass: lhs <= rhs + 3.0 * lhs_stderr,
    })
}

/// `β`-stable outer process time-changed by an `α`-stable inner process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaTimeSpec {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub subordinator: bool,
    pub eps_grid: Vec<f64>,
    pub n_samples: u64,
    #[serde(default = "default_grid_inner")]
    pub grid_inner: usize,
    #[serde(default = "default_grid_outer")]
    pub grid_outer_per_unit: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

fn default_grid_inner() -> usize {
    1 << 10
}

fn default_grid_outer() -> usize {
    1 << 12
}

impl AlphaTimeSpec {
    /// Inner and outer specs. Index 2 means standard Brownian motion on either side.
    pub fn processes(&self) -> Result<(ProcessSpec, ProcessSpec)> {
        let inner = if self.subordinator {
            ProcessSpec::StableSubordinator { alpha: self.alpha }
        } else {
            ProcessSpec::StableSymmetric {
                alpha: self.alpha,
                normalize_bm: true,
            }
        };
        let outer = if self.beta == 2.0 {
            ProcessSpec::Brownian
        } else {
            ProcessSpec::StableSymmetric {
                alpha: self.beta,
                normalize_bm: false,
            }
        };
        inner.validate()?;
        outer.validate()?;
        Ok((inner, outer))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaTimeReport {
    pub curve: SmallDevCurve,
    /// Mean over replicates of `min(1, e^{1 - N(K, c₀ε^β)})`, `K` the sampled inner range.
    pub entropy_bound: Vec<f64>,
    /// `p̂ ≤ bound + 3·stderr` at each ε.
    pub bound_holds: Vec<bool>,
    pub c0: f64,
    pub predicted_exponent: f64,
    pub verdict: Verdict,
}

/// Direct Monte Carlo of `P(sup|X(Y(t))| ≤ ε)` alongside the entropy-route upper bound.
pub fn alpha_time_route(spec: &AlphaTimeSpec, policy: &TolerancePolicy) -> Result<AlphaTimeReport> {
    let predicted = alpha_time_exponent(spec.alpha, spec.beta, spec.subordinator)?;
    let (inner, outer) = spec.processes()?;
    if spec.eps_grid.is_empty() || spec.eps_grid.windows(2).any(|w| w[1] >= w[0]) || spec.eps_grid[0] <= 0.0 {
        return Err(param("eps_grid", "need a nonempty, strictly decreasing, positive grid"));
    }
    if spec.n_samples == 0 {
        return Err(param("n_samples", "must be positive"));
    }
    let c0 = calibrate_c0(&outer)?;
    let chain = IterationChain::new(vec![inner, outer])?.with_grids(spec.grid_inner, spec.grid_outer_per_unit)?;
    let composer = Composer::new(chain)?;
    let m = spec.eps_grid.len();
    let radii: Vec<f64> = spec.eps_grid.iter().map(|e| c0 * e.powf(spec.beta)).collect();

    struct Acc {
        hits: Vec<u64>,
        bound: Vec<f64>,
        err: Option<Error>,
    }
    let acc = Workers::new(spec.threads).run(
        spec.n_samples,
        || Acc {
            hits: vec![0; m],
            bound: vec![0.0; m],
            err: None,
        },
        |acc, r| {
            if acc.err.is_some() {
                return;
            }
            let streams = ReplicateStreams::new(spec.master_seed, r, ModuleTag::Composition);
            let step = || -> Result<(f64, Vec<f64>)> {
                let base = inner.sample(spec.grid_inner, 1.0, &mut streams.stream(0, 0))?;
                let mut k = base.values.clone();
                k.sort_by(f64::total_cmp);
                let z = composer.compose_over(base, &streams)?;
                let b = radii
                    .iter()
                    .map(|&rad| (1.0 - cover_sorted(&k, rad) as f64).exp().min(1.0))
                    .collect();
                Ok((z.sup_abs(), b))
            };
            match step() {
                Ok((sup, b)) => {
                    tally_into(&mut acc.hits, &spec.eps_grid, sup);
                    for (s, v) in acc.bound.iter_mut().zip(b) {
                        *s += v;
                    }
                }
                Err(e) => acc.err = Some(e),
            }
        },
        |mut a, b| {
            for i in 0..m {
                a.hits[i] += b.hits[i];
                a.bound[i] += b.bound[i];
            }
            a.err = a.err.or(b.err);
            a
        },
    );
    if let Some(e) = acc.err {
        return Err(e);
    }
    let n = spec.n_samples as f64;
    let curve = SmallDevCurve::from_hits(
        spec.eps_grid.clone(),
        acc.hits,
        spec.n_samples,
        NormKind::SupAbs,
        spec.grid_outer_per_unit,
    );
    let entropy_bound: Vec<f64> = acc.bound.iter().map(|b| b / n).collect();
    let bound_holds = (0..m)
        .map(|i| {
            let p = curve.p_hat[i];
            p <= entropy_bound[i] + 3.0 * (p * (1.0 - p) / n).sqrt()
        })
        .collect();
    let law = AsymptoticLaw::weak(predicted, NormKind::SupAbs)?;
    let policy = TolerancePolicy {
        window: spec.window.or(policy.window),
        ..*policy
    };
    let verdict = verify_prediction(&curve, &law, &policy, None);
    Ok(AlphaTimeReport {
        curve,
        entropy_bound,
        bound_holds,
        c0,
        predicted_exponent: predicted,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_cdf_matches_arctan() {
        for x in [0.1, 0.5, 1.0, 3.0] {
            let want = 2.0 / PI * f64::atan(x);
            assert!((stable_abs_cdf(1.0, x).unwrap() - want).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn cdf_edges() {
        assert_eq!(stable_abs_cdf(1.5, 0.0).unwrap(), 0.0);
        assert!(stable_abs_cdf(0.7, 1e6).unwrap() > 0.999);
        assert!(stable_abs_cdf(3.0, 1.0).is_err());
    }

    #[test]
    fn bm_c0() {
        // q solves P(|N(0,1)| ≤ q) = e^{-1}: q ≈ 0.4789.
        let c0 = calibrate_c0(&ProcessSpec::Brownian).unwrap();
        assert!((c0 - (2.0f64 / 0.47895).powi(2)).abs() < 0.05, "{c0}");
    }

    #[test]
    fn vacuous_bound_passes() {
        let v = entropy_upper_bound_check(&ProcessSpec::Brownian, 1.0, &[0.0, 0.1], 1.0, 100, 1, 0).unwrap();
        assert_eq!(v.n_cover, 1);
        assert_eq!(v.rhs, 1.0);
        assert!(v.pass);
    }
}
