use serde::Serialize;
use smalldev::asymptotics::{AsymptoticLaw, NormKind};
use smalldev::estimator::{
    estimate_curve, fit_law, verify_prediction, EstimateConfig, FitResult, SmallDevCurve, Target, Verdict,
};
use smalldev::report::{curve_csv, loglog_svg, norm_name, Series, SeriesStyle};

use super::{outcome, verdict_word};
use crate::config::{self, EstimateFile};
use crate::error::CliError;
use crate::output::Sink;
use crate::{Common, EstimateArgs, Outcome};

#[derive(Debug, Serialize)]
struct Report<'a> {
    seed: u64,
    n_samples: u64,
    norm: &'static str,
    target: &'a Target,
    law: Option<AsymptoticLaw>,
    /// Free fit when no law is given.
    fit: Option<FitResult>,
    verdict: Option<Verdict>,
    pass: bool,
}

/// `(ε, -log p̂)` for `0 < p̂ < 1`.
fn neg_log_points(curve: &SmallDevCurve) -> Vec<(f64, f64)> {
    (0..curve.len())
        .filter(|&i| curve.p_hat[i] > 0.0 && curve.p_hat[i] < 1.0)
        .map(|i| (curve.eps_grid[i], -curve.p_hat[i].ln()))
        .collect()
}

pub fn plot(title: &str, curve: &SmallDevCurve, law: Option<&AsymptoticLaw>) -> String {
    let mut series = vec![Series {
        label: "Monte Carlo".into(),
        points: neg_log_points(curve),
        style: SeriesStyle::Markers,
    }];
    if let Some(l) = law.filter(|l| l.constant_known) {
        series.push(Series {
            label: format!("{:.4} eps^-{:.4}", l.constant, l.exponent),
            points: curve.eps_grid.iter().map(|&e| (e, l.neg_log_prob(e))).collect(),
            style: SeriesStyle::Line,
        });
    }
    loglog_svg(title, "eps", "-log P", &series)
}

pub fn run(args: &EstimateArgs, common: &Common) -> Result<Outcome, CliError> {
    let file: EstimateFile = config::load(&args.config)?;
    let target = file.target.build()?;
    let eps = file.eps.descending("eps")?;
    let n_samples = args.samples.unwrap_or(file.n_samples);
    let law = file.law.as_ref().map(|l| l.resolve(file.norm)).transpose()?;
    let cfg = EstimateConfig::new(eps, n_samples, args.seed).with_threads(common.threads);

    let curve = estimate_curve(&target, &cfg, file.norm)?;
    let refined = match file.refine {
        true => Some(estimate_curve(&target.refined(), &cfg, file.norm)?),
        false => None,
    };
    let verdict = law.map(|l| verify_prediction(&curve, &l, &file.tolerance, refined.as_ref()));
    let fit = match &verdict {
        Some(_) => None,
        None => fit_law(&curve, None).ok(),
    };
    let pass = verdict.as_ref().is_none_or(|v| v.pass);

    let stem = file.stem.as_deref().unwrap_or("estimate");
    let mut sink = Sink::new(common.out_dir.as_deref(), common.format)?;
    sink.table(&format!("{stem}_curve"), curve_csv(&curve), &curve)?;
    if let Some(r) = &refined {
        sink.table(&format!("{stem}_refined_curve"), curve_csv(r), r)?;
    }
    let report = Report {
        seed: args.seed,
        n_samples,
        norm: norm_name(file.norm),
        target: &target,
        law,
        fit,
        verdict: verdict.clone(),
        pass,
    };
    sink.json(&format!("{stem}_verdict.json"), &report)?;
    if file.svg {
        sink.write(&format!("{stem}.svg"), &plot(stem, &curve, law.as_ref()))?;
    }

    summarize(&curve, law.as_ref(), verdict.as_ref(), fit.as_ref());
    for p in sink.written() {
        eprintln!("wrote {}", p.display());
    }
    Ok(outcome(pass))
}

fn summarize(curve: &SmallDevCurve, law: Option<&AsymptoticLaw>, verdict: Option<&Verdict>, fit: Option<&FitResult>) {
    let norm = match curve.norm_kind {
        NormKind::SupAbs => "sup|Z|",
        NormKind::Range => "range(Z)",
    };
    println!(
        "P({norm} <= eps), {} samples, grid {}",
        curve.n_samples, curve.grid_resolution
    );
    for i in 0..curve.len() {
        println!(
            "  eps {:<10.6} p_hat {:<12.6e} 99% CI [{:.3e}, {:.3e}]{}",
            curve.eps_grid[i],
            curve.p_hat[i],
            curve.ci_low[i],
            curve.ci_high[i],
            if curve.one_sided[i] { " (no hits)" } else { "" }
        );
    }
    for w in &curve.warnings {
        println!("  warning: {w}");
    }
    if let Some(f) = fit {
        println!(
            "fit: exponent {:.4} ± {:.4}, constant {:.4}",
            f.exponent_hat, f.exponent_stderr, f.constant_hat
        );
    }
    if let (Some(l), Some(v)) = (law, verdict) {
        match &v.fit {
            Some(f) => println!(
                "exponent {:.4} ± {:.4} over eps [{:.4}, {:.4}], predicted {:.4}",
                f.exponent_hat, f.exponent_stderr, f.eps_window.0, f.eps_window.1, l.exponent
            ),
            None => println!("exponent fit unavailable, predicted {:.4}", l.exponent),
        }
        if let Some(r) = v.constant_ratio {
            println!("constant ratio {r:.4} (predicted {:.4})", l.constant);
        }
        for n in &v.notes {
            println!("note: {n}");
        }
        println!("verdict: {}", verdict_word(v.pass));
    }
}
