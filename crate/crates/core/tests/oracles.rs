//! Statistical and analytical oracles for the samplers, estimator and entropy tools.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

mod common;
use common::{brute_force_cover, reflection_bm_smalldev};

use smalldev::composition::{Composer, IterationChain};
use smalldev::entropy::*;
use smalldev::estimator::*;
use smalldev::process::*;
use smalldev::rng::{ModuleTag, ReplicateStreams, Stream, StreamId};
use smalldev::stats::wilson_99;

fn stream(seed: u64, rep: u64) -> Stream {
    Stream::new(seed, StreamId::new(rep, ModuleTag::Sampler))
}

#[test]
fn theta_series_matches_reflection_formula() {
    for eps in [0.2, 0.3, 0.4, 0.5, 0.6, 1.0, 1.5, 2.0, 3.0] {
        let a = exact_bm_smalldev(eps).unwrap();
        let b = reflection_bm_smalldev(eps);
        // The normal tail functions carry ~1e-12 error per term over ~60 terms.
        assert!((a - b).abs() < 1e-10, "eps {eps}: series {a} vs reflection {b}");
    }
    // The value at 0.5 is about 0.00916.
    assert!((exact_bm_smalldev(0.5).unwrap() - 0.009157).abs() < 1e-6);
}

#[test]
fn monte_carlo_agrees_with_theta_series() {
    let t = Target::process(ProcessSpec::Brownian, 1 << 12);
    let c = estimate_curve(
        &t,
        &EstimateConfig::new(vec![2.0, 1.0, 0.7], 20_000, 11),
        smalldev::asymptotics::NormKind::SupAbs,
    )
    .unwrap();
    for i in 0..c.len() {
        let exact = exact_bm_smalldev(c.eps_grid[i]).unwrap();
        assert!(
            c.ci_low[i] - 0.01 <= exact && exact <= c.ci_high[i] + 0.01,
            "eps {}: {} vs {exact}",
            c.eps_grid[i],
            c.p_hat[i]
        );
    }
}

#[test]
fn greedy_cover_is_optimal_on_small_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.random_range(1..=12);
        let pts: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let eps = rng.random_range(0.01..0.6);
        assert_eq!(
            covering_number(&pts, eps).unwrap(),
            brute_force_cover(&pts, eps),
            "{pts:?} eps {eps}"
        );
    }
}

#[test]
fn wilson_intervals_cover_at_nominal_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (p, n) = (0.03, 2000u64);
    let covered = (0..1000)
        .filter(|_| {
            let hits = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
            let ci = wilson_99(hits, n);
            ci.low <= p && p <= ci.high
        })
        .count();
    assert!(covered >= 985, "coverage {covered}/1000");
}

#[test]
fn fbm_covariance_matches_theory() {
    let h = 0.3;
    let sampler = FbmSampler::new(h, 17).unwrap();
    let n = 40_000;
    let (i, j) = (5usize, 16usize);
    let (ti, tj) = (i as f64 / 16.0, j as f64 / 16.0);
    let mut st = stream(5, 0);
    let mut out = vec![0.0; 17];
    let (mut sii, mut sij, mut sjj) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        sampler.fill_path(&mut st.rng, 1.0 / 16.0, &mut out);
        sii += out[i] * out[i];
        sij += out[i] * out[j];
        sjj += out[j] * out[j];
    }
    let cov = |s: f64, t: f64| 0.5 * (s.abs().powf(2.0 * h) + t.abs().powf(2.0 * h) - (t - s).abs().powf(2.0 * h));
    for (got, want) in [(sii, cov(ti, ti)), (sij, cov(ti, tj)), (sjj, cov(tj, tj))] {
        let got = got / n as f64;
        assert!(
            (got - want).abs() < 4.0 * want.abs().max(0.2) * (2.0 / n as f64).sqrt() * 2.0,
            "{got} vs {want}"
        );
    }
}

#[test]
fn two_sided_true_fbm_has_dependent_wings() {
    let h = 0.75;
    // Cov(X(-1), X(1)) = (1 + 1 - 2^{2H})/2 < 0 for H > 1/2.
    let want = 0.5 * (2.0 - 2f64.powf(2.0 * h));
    let n = 20_000;
    let sampler = FbmSampler::new(h, 17).unwrap();
    let mut st = stream(6, 0);
    let mut out = vec![0.0; 17];
    let (mut shift, mut dense) = (0.0, 0.0);
    for r in 0..n {
        sampler.fill_true(&mut st.rng, 0.125, 8, &mut out);
        shift += out[0] * out[16];
        if r < 4000 {
            let p = sample_fbm_true(h, 1.0, 1.0, 9, &mut stream(7, r as u64)).unwrap();
            dense += p.values[0] * p.values[8];
        }
    }
    let (shift, dense) = (shift / n as f64, dense / 4000.0);
    assert!((shift - want).abs() < 0.04, "shifted {shift} vs {want}");
    assert!((dense - want).abs() < 0.08, "cholesky {dense} vs {want}");
}

#[test]
fn stable_characteristic_function() {
    let alpha = 1.5;
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<f64> = (0..n).map(|_| symmetric_stable(alpha, &mut rng)).collect();
    for u in [0.3, 1.0, 2.0] {
        let emp = xs.iter().map(|x| (u * x).cos()).sum::<f64>() / n as f64;
        let want = (-f64::powf(u, alpha)).exp();
        assert!((emp - want).abs() < 4.0 / (n as f64).sqrt(), "u {u}: {emp} vs {want}");
    }
    let a = 0.6;
    let ss: Vec<f64> = (0..n).map(|_| positive_stable(a, &mut rng)).collect();
    for lambda in [0.5, 1.0, 3.0] {
        let emp = ss.iter().map(|s| (-lambda * s).exp()).sum::<f64>() / n as f64;
        let want = (-f64::powf(lambda, a)).exp();
        assert!(
            (emp - want).abs() < 4.0 / (n as f64).sqrt(),
            "lambda {lambda}: {emp} vs {want}"
        );
    }
}

#[test]
fn stable_cdf_quadrature() {
    let normal = Normal::new(0.0, std::f64::consts::SQRT_2).unwrap();
    for x in [0.1, 0.5, 1.0, 2.5] {
        let want = 2.0 * normal.cdf(x) - 1.0;
        assert!((stable_abs_cdf(2.0, x).unwrap() - want).abs() < 1e-6, "x {x}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for beta in [0.7, 1.5] {
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| symmetric_stable(beta, &mut rng).abs()).collect();
        for x in [0.3, 1.0, 3.0] {
            let emp = xs.iter().filter(|&&v| v <= x).count() as f64 / n as f64;
            let q = stable_abs_cdf(beta, x).unwrap();
            assert!((emp - q).abs() < 0.006, "beta {beta} x {x}: {emp} vs {q}");
        }
    }
}

fn x_of_y_at_one(n: u64) -> Vec<f64> {
    let chain = IterationChain::iterated_brownian(2)
        .unwrap()
        .with_grids(2, 4096)
        .unwrap();
    let composer = Composer::new(chain).unwrap();
    (0..n)
        .map(|r| {
            let z = composer
                .compose(&ReplicateStreams::new(17, r, ModuleTag::Composition))
                .unwrap();
            z.base.values[1]
        })
        .collect()
}

#[test]
fn iterated_bm_value_at_one() {
    let v = x_of_y_at_one(100_000);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    // Var X(Y(1)) = E|Y(1)| = sqrt(2/π)
    let want = (2.0 / std::f64::consts::PI).sqrt();
    assert!((var - want).abs() < 0.02, "var {var} vs {want}");
    let mut s = v.clone();
    s.sort_by(f64::total_cmp);
    let cut = s.len() / 100;
    let t = &s[cut..s.len() - cut];
    let m = t.iter().sum::<f64>() / t.len() as f64;
    let m2 = t.iter().map(|x| (x - m).powi(2)).sum::<f64>() / t.len() as f64;
    let m3 = t.iter().map(|x| (x - m).powi(3)).sum::<f64>() / t.len() as f64;
    let skew = m3 / m2.powf(1.5);
    assert!(skew.abs() < 0.1, "trimmed skewness {skew}");
}

#[test]
fn outer_refinement_moves_sup_by_less_than_modulus() {
    let base = IterationChain::iterated_brownian(2)
        .unwrap()
        .with_grids(257, 256)
        .unwrap();
    let fine = base.clone().with_grids(257, 512).unwrap();
    let (a, b) = (Composer::new(base).unwrap(), Composer::new(fine).unwrap());
    let n = 100u64;
    let (mut sa, mut sb, mut sd2) = (0.0, 0.0, 0.0);
    let mut modulus = 0.0;
    for r in 0..n {
        let st = ReplicateStreams::new(23, r, ModuleTag::Composition);
        let za = a.compose(&st).unwrap();
        let zb = b.compose(&st).unwrap();
        sa += za.sup_abs();
        sb += zb.sup_abs();
        sd2 += (za.sup_abs() - zb.sup_abs()).powi(2);
        // Outer modulus at the half step over the realized inner range.
        let (lo, hi) = (za.levels[0].range.inf_val, za.levels[0].range.sup_val);
        let h = 1.0 / 512.0;
        let len = hi - lo;
        let pts = (len / h).ceil() as usize + 1;
        let w = sample_brownian(pts.max(2), h * (pts.max(2) - 1) as f64, &mut stream(29, r)).unwrap();
        modulus += w.values.windows(2).map(|p| (p[1] - p[0]).abs()).fold(0.0, f64::max);
    }
    let nf = n as f64;
    let diff = ((sa - sb) / nf).abs();
    let se = (sd2 / nf).sqrt() / nf.sqrt();
    assert!(
        diff < modulus / nf + 3.0 * se,
        "mean shift {diff}, modulus {}",
        modulus / nf
    );
}

#[test]
fn local_time_is_stable_across_bin_widths_and_grids() {
    let draws = 1000u64;
    let median = |n_points: usize, power: f64| {
        let mut ls: Vec<f64> = (0..draws)
            .map(|r| {
                let p = sample_brownian(n_points, 1.0, &mut stream(31, r)).unwrap();
                local_time_max(&p, (n_points as f64).powf(-power)).unwrap().l_star_hat
            })
            .collect();
        ls.sort_by(f64::total_cmp);
        ls[ls.len() / 2]
    };
    let reference = median(1 << 15, 1.0 / 3.0);
    for (n, pw) in [(1 << 14, 1.0 / 3.0), (1 << 14, 0.25), (1 << 14, 0.5)] {
        let m = median(n, pw);
        assert!(
            (m / reference - 1.0).abs() < 0.2,
            "n {n} power {pw}: {m} vs {reference}"
        );
    }
}

#[test]
fn local_time_dominates_covering() {
    let trials = 1000u64;
    let mut failures = 0;
    let mut checks = 0;
    for r in 0..trials {
        let p = sample_brownian(4096, 1.0, &mut stream(37, r)).unwrap();
        let range = RangeStats::from_values(&p.values).range;
        let b = default_bin_width(4096, range);
        let l1 = local_time_max(&p, b).unwrap().l_star_hat;
        let l2 = local_time_max(&p, 2.0 * b).unwrap().l_star_hat;
        let diag = (l1 - l2).abs() / l1;
        for eps in [0.1, 0.05, 0.02] {
            let n = covering_number(&p.values, eps).unwrap() as f64;
            checks += 1;
            if n < 1.0 / (2.0 * eps * l1 * (1.0 + diag)) {
                failures += 1;
            }
        }
    }
    assert!((failures as f64) < 0.01 * checks as f64, "{failures}/{checks}");
}

#[test]
fn entropy_bound_for_brownian_outer() {
    let c0 = calibrate_c0(&ProcessSpec::Brownian).unwrap();
    let k: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
    let v = entropy_upper_bound_check(&ProcessSpec::Brownian, c0, &k, 0.2, 10_000, 41, 0).unwrap();
    assert!(v.pass, "{v:?}");
    // A wide set forces a nontrivial bound.
    let wide: Vec<f64> = (0..200).map(|i| i as f64).collect();
    let v = entropy_upper_bound_check(&ProcessSpec::Brownian, c0, &wide, 0.5, 10_000, 43, 0).unwrap();
    assert!(v.rhs < 1.0 && v.pass, "{v:?}");
    let mut last = f64::INFINITY;
    for eps in [1.0, 0.5, 0.2, 0.1, 0.05] {
        let n = covering_number(&wide, c0 * eps * eps).unwrap();
        let rhs = (1.0 - n as f64).exp().min(1.0);
        assert!(rhs <= last);
        last = rhs;
    }
}

#[test]
fn covering_tail_is_grid_stable() {
    let cfg = |grid| CoveringTailConfig {
        alpha: 1.5,
        eps_grid: vec![0.1],
        delta: 1.0,
        n_samples: 5000,
        grid,
        master_seed: 47,
        threads: 0,
    };
    let a = covering_tail(&cfg(512)).unwrap().profiles[0].clone();
    let b = covering_tail(&cfg(1024)).unwrap().profiles[0].clone();
    assert!(a.p_hat > 0.0 && b.p_hat > 0.0);
    let width = (a.ci_high - a.ci_low).max(b.ci_high - b.ci_low);
    assert!((a.p_hat - b.p_hat).abs() < 3.0 * width, "{} vs {}", a.p_hat, b.p_hat);
}

#[test]
fn covering_tail_decays_with_eps() {
    let cfg = CoveringTailConfig {
        alpha: 1.5,
        eps_grid: vec![0.1, 0.05, 0.025],
        delta: 1.0,
        n_samples: 4000,
        grid: 1024,
        master_seed: 53,
        threads: 0,
    };
    let t = covering_tail(&cfg).unwrap();
    for w in t.profiles.windows(2) {
        assert!(w[1].p_hat <= w[0].ci_high, "{:?}", t.profiles);
    }
}

#[test]
fn bm_fit_is_close_to_theory() {
    let t = Target::process(ProcessSpec::Brownian, 1 << 12);
    let curve = estimate_curve(
        &t,
        &EstimateConfig::new(log_eps_grid(0.45, 0.9, 6).unwrap(), 20_000, 59),
        smalldev::asymptotics::NormKind::SupAbs,
    )
    .unwrap();
    let f = fit_law(&curve, None).unwrap();
    assert!((1.7..2.4).contains(&f.exponent_hat), "{f:?}");
    let g = fit_law(&curve, Some(2.0)).unwrap();
    assert!(
        (g.constant_hat / (std::f64::consts::PI.powi(2) / 8.0) - 1.0).abs() < 0.2,
        "{g:?}"
    );
}
