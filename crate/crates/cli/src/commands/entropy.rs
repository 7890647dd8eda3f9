use std::fmt::Write;

use serde_json::json;
use smalldev::asymptotics::AsymptoticLaw;
use smalldev::asymptotics::NormKind;
use smalldev::entropy::{
    alpha_time_route, covering_number, covering_tail, lacey_tail_check, AlphaTimeSpec, CoveringTail,
    CoveringTailConfig, LaceyConfig, DEFAULT_DELTA,
};
use smalldev::estimator::log_eps_grid;
use smalldev::process::{ProcessSpec, RangeStats};
use smalldev::report::{covering_csv, curve_csv, tail_csv};
use smalldev::rng::{ModuleTag, Stream, StreamId};

use super::{outcome, verdict_word};
use crate::commands::estimate::plot;
use crate::config::{self, EntropyFile, GridSpec, Study};
use crate::error::CliError;
use crate::output::Sink;
use crate::{Common, EntropyArgs, Outcome};

pub const PROFILE_HEADER: &str = "eps,n_cover,bound";

/// Config file entries overridden by flags.
fn merged(args: &EntropyArgs) -> Result<EntropyFile, CliError> {
    let mut f: EntropyFile = match &args.config {
        Some(p) => config::load(p)?,
        None => EntropyFile::default(),
    };
    let flag_study = [
        (args.profile, Study::Profile),
        (args.covering, Study::Covering),
        (args.lacey, Study::Lacey),
        (args.alpha_time, Study::AlphaTime),
    ]
    .into_iter()
    .find_map(|(on, s)| on.then_some(s));
    f.study = flag_study.or(f.study);
    f.alpha = args.alpha.or(f.alpha);
    f.beta = args.beta.or(f.beta);
    if args.subordinator {
        f.subordinator = Some(true);
    }
    f.process = args.process.or(f.process);
    if let Some(e) = &args.eps {
        f.eps = Some(GridSpec::values(e.clone()));
    }
    if let Some(u) = &args.u {
        f.u = Some(GridSpec::values(u.clone()));
    }
    f.n_samples = args.samples.or(f.n_samples);
    f.grid = args.grid.or(f.grid);
    f.delta = args.delta.or(f.delta);
    Ok(f)
}

pub fn run(args: &EntropyArgs, common: &Common) -> Result<Outcome, CliError> {
    let f = merged(args)?;
    let study = f
        .study
        .ok_or_else(|| CliError::Usage("choose a study: --profile, --covering, --lacey or --alpha-time".into()))?;
    let stem = f.stem.clone().unwrap_or_else(|| study.name().to_string());
    let mut sink = Sink::new(common.out_dir.as_deref(), common.format)?;
    let pass = match study {
        Study::Profile => profile(&f, args.seed, &stem, &mut sink)?,
        Study::Covering => covering(&f, args.seed, common.threads, &stem, &mut sink)?,
        Study::Lacey => lacey(&f, args.seed, common.threads, &stem, &mut sink)?,
        Study::AlphaTime => alpha_time(&f, args.seed, common.threads, &stem, &mut sink)?,
    };
    println!("verdict: {}", verdict_word(pass));
    for p in sink.written() {
        eprintln!("wrote {}", p.display());
    }
    Ok(outcome(pass))
}

fn eps_or(f: &EntropyFile, default: &[f64]) -> Result<Vec<f64>, CliError> {
    match &f.eps {
        Some(g) => g.descending("eps"),
        None => Ok(default.to_vec()),
    }
}

/// Covering numbers of the range of one sampled path, against the deterministic bound.
fn profile(f: &EntropyFile, seed: u64, stem: &str, sink: &mut Sink) -> Result<bool, CliError> {
    let spec = f.process.unwrap_or(ProcessSpec::Brownian);
    let grid = f.grid.unwrap_or(1 << 12);
    let eps = eps_or(f, &[0.5, 0.2, 0.1, 0.05, 0.02, 0.01])?;
    let path = spec.sample(grid, 1.0, &mut Stream::new(seed, StreamId::new(0, ModuleTag::Entropy)))?;
    let span = RangeStats::from_values(&path.values).range;
    let mut rows = Vec::new();
    for &e in &eps {
        let n = covering_number(&path.values, e)?;
        rows.push((e, n, (span / (2.0 * e)).floor() as usize + 1));
    }
    // eps is decreasing, so covering numbers must not decrease along it.
    let monotone = rows.windows(2).all(|w| w[1].1 >= w[0].1);
    let bounded = rows.iter().all(|r| r.1 <= r.2);
    let mut csv = format!("{PROFILE_HEADER}\n");
    for (e, n, b) in &rows {
        writeln!(csv, "{e},{n},{b}").unwrap();
    }
    let table: Vec<_> = rows
        .iter()
        .map(|(e, n, b)| json!({ "eps": e, "n_cover": n, "bound": b }))
        .collect();
    sink.table(stem, csv, &table)?;
    sink.json(
        &format!("{stem}_report.json"),
        &json!({ "study": "profile", "seed": seed, "process": spec, "grid": grid, "range": span,
                 "monotone": monotone, "within_bound": bounded, "pass": monotone && bounded }),
    )?;
    println!("covering numbers of one {spec:?} path (range {span:.4}):");
    for (e, n, b) in &rows {
        println!("  eps {e:<8} N = {n:<6} bound {b}");
    }
    Ok(monotone && bounded)
}

/// `p̂` must not rise above the previous upper confidence limit as `ε` shrinks.
pub fn tail_nonincreasing(t: &CoveringTail) -> bool {
    let mut idx: Vec<usize> = (0..t.profiles.len()).collect();
    idx.sort_by(|&a, &b| t.profiles[b].eps.total_cmp(&t.profiles[a].eps));
    idx.windows(2)
        .all(|w| t.profiles[w[1]].p_hat <= t.profiles[w[0]].ci_high)
}

fn covering(f: &EntropyFile, seed: u64, threads: usize, stem: &str, sink: &mut Sink) -> Result<bool, CliError> {
    let cfg = CoveringTailConfig {
        alpha: f.alpha.unwrap_or(1.5),
        eps_grid: eps_or(f, &[0.1, 0.05, 0.025])?,
        delta: f.delta.unwrap_or(DEFAULT_DELTA),
        n_samples: f.n_samples.unwrap_or(10_000),
        grid: f.grid.unwrap_or(1 << 10),
        master_seed: seed,
        threads,
    };
    let t = covering_tail(&cfg)?;
    let pass = tail_nonincreasing(&t);
    sink.table(stem, covering_csv(&t), &t)?;
    sink.json(
        &format!("{stem}_report.json"),
        &json!({ "study": "covering", "config": cfg, "result": t, "nonincreasing": pass, "pass": pass }),
    )?;
    println!(
        "P(N(K, eps) < delta k*), alpha {}, delta {}, {} samples:",
        cfg.alpha, cfg.delta, cfg.n_samples
    );
    for p in &t.profiles {
        println!(
            "  eps {:<8} k* {:<4} median N {:<5} p_hat {:.4e} 99% CI [{:.3e}, {:.3e}]",
            p.eps, p.k_star, p.n_cover, p.p_hat, p.ci_low, p.ci_high
        );
    }
    Ok(pass)
}

fn lacey(f: &EntropyFile, seed: u64, threads: usize, stem: &str, sink: &mut Sink) -> Result<bool, CliError> {
    let alpha = f.alpha.unwrap_or(2.0);
    let u_grid = match &f.u {
        Some(g) => g.ascending("u")?,
        None => (0..9).map(|i| 1.2 + 0.1 * i as f64).collect(),
    };
    let cfg = LaceyConfig {
        alpha,
        u_grid,
        n_samples: f.n_samples.unwrap_or(10_000),
        grid: f.grid.unwrap_or(1 << 12),
        bin_width: f.bin_width,
        master_seed: seed,
        threads,
    };
    let res = lacey_tail_check(&cfg)?;
    let band = f.slope_band.unwrap_or((0.8 * alpha, 1.2 * alpha));
    let pass = (band.0..=band.1).contains(&res.slope);
    sink.table(stem, tail_csv(&res), &res)?;
    sink.json(
        &format!("{stem}_report.json"),
        &json!({ "study": "lacey", "config": cfg, "result": res, "slope_band": band, "pass": pass }),
    )?;
    println!(
        "local-time tail: slope {:.4} ± {:.4} (asymptote {alpha}, accepted [{}, {}]), median L* {:.4}",
        res.slope, res.slope_stderr, band.0, band.1, res.median_l_star
    );
    Ok(pass)
}

fn alpha_time(f: &EntropyFile, seed: u64, threads: usize, stem: &str, sink: &mut Sink) -> Result<bool, CliError> {
    let spec = AlphaTimeSpec {
        alpha: f.alpha.unwrap_or(2.0),
        beta: f.beta.unwrap_or(2.0),
        subordinator: f.subordinator.unwrap_or(false),
        eps_grid: match &f.eps {
            Some(g) => g.descending("eps")?,
            None => log_eps_grid(0.25, 0.5, 9)?,
        },
        n_samples: f.n_samples.unwrap_or(10_000),
        grid_inner: f.grid.unwrap_or(1 << 10),
        grid_outer_per_unit: f.grid_outer_per_unit.unwrap_or(1 << 12),
        master_seed: seed,
        threads,
        window: f.tolerance.and_then(|t| t.window),
    };
    let r = alpha_time_route(&spec, &f.tolerance.unwrap_or_default())?;
    let bounds_hold = r.bound_holds.iter().all(|&b| b);
    let pass = r.verdict.pass && bounds_hold;
    sink.table(stem, curve_csv(&r.curve), &r.curve)?;
    sink.json(
        &format!("{stem}_report.json"),
        &json!({ "study": "alpha_time", "spec": spec, "report": r, "pass": pass }),
    )?;
    if f.svg.unwrap_or(true) {
        let law = AsymptoticLaw::weak(r.predicted_exponent, NormKind::SupAbs)?;
        sink.write(&format!("{stem}.svg"), &plot(stem, &r.curve, Some(&law)))?;
    }
    println!(
        "alpha-time: alpha {}, beta {}, subordinator {}, predicted exponent {:.4}, c0 {:.4}",
        spec.alpha, spec.beta, spec.subordinator, r.predicted_exponent, r.c0
    );
    for i in 0..r.curve.len() {
        println!(
            "  eps {:<10.6} p_hat {:<12.6e} entropy bound {:.4e}{}",
            r.curve.eps_grid[i],
            r.curve.p_hat[i],
            r.entropy_bound[i],
            if r.bound_holds[i] { "" } else { " (bound violated)" }
        );
    }
    match &r.verdict.fit {
        Some(fit) => println!(
            "exponent {:.4} ± {:.4} over eps [{:.4}, {:.4}]",
            fit.exponent_hat, fit.exponent_stderr, fit.eps_window.0, fit.eps_window.1
        ),
        None => println!("exponent fit unavailable"),
    }
    for n in &r.verdict.notes {
        println!("note: {n}");
    }
    Ok(pass)
}
