//! Browser bindings: a constants table, a small Monte Carlo curve and a sampled path.
//!
//! Every exported function returns a JSON string; errors become thrown JS strings.

use serde_json::{json, Value};
use smalldev::asymptotics::{iterated_bm_constants, iterated_bm_law, iterated_bm_tau_rational, NormKind};
use smalldev::composition::IterationChain;
use smalldev::entropy::covering_number;
use smalldev::estimator::{estimate_curve, fit_law, log_eps_grid, EstimateConfig, Target, TargetSampler};
use smalldev::process::{ProcessSpec, RangeStats};
use wasm_bindgen::prelude::*;

/// Largest replicate count accepted from the page, to keep the tab responsive.
pub const MAX_SAMPLES: u32 = 50_000;

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// Rows `n = 1..=n_max` of `τ_n`, `d_n` and the sup-norm constant of `n`-iterated BM.
pub fn constants(n_max: usize) -> Result<Value, String> {
    if !(1..=30).contains(&n_max) {
        return Err(format!("n must lie in 1..=30, got {n_max}"));
    }
    let c = iterated_bm_constants(n_max).map_err(|e| e.to_string())?;
    let rows = (1..=n_max)
        .map(|n| {
            let law = iterated_bm_law(n).map_err(|e| e.to_string())?;
            Ok(json!({
                "n": n,
                "tau_exact": iterated_bm_tau_rational(n).map(|r| r.to_string()),
                "tau": c.tau_seq[n - 1],
                "d": c.const_seq[n - 1],
                "constant": law.constant,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Value::Array(rows))
}

/// `P(sup|X^{(depth)}| ≤ ε)` for iterated BM on a log grid, with a free fit and the predicted law.
pub fn curve(
    depth: usize,
    eps_min: f64,
    eps_max: f64,
    count: usize,
    n_samples: u32,
    seed: u64,
) -> Result<Value, String> {
    if !(1..=3).contains(&depth) {
        return Err(format!("depth must lie in 1..=3, got {depth}"));
    }
    if n_samples == 0 || n_samples > MAX_SAMPLES {
        return Err(format!("samples must lie in 1..={MAX_SAMPLES}"));
    }
    let err = |e: smalldev::Error| e.to_string();
    let target = if depth == 1 {
        Target::process(ProcessSpec::Brownian, 1024)
    } else {
        Target::Chain(
            IterationChain::iterated_brownian(depth)
                .and_then(|c| c.with_grids(257, 1024))
                .map_err(err)?,
        )
    };
    let eps = log_eps_grid(eps_min, eps_max, count).map_err(err)?;
    let cfg = EstimateConfig::new(eps, n_samples as u64, seed).with_threads(1);
    let c = estimate_curve(&target, &cfg, NormKind::SupAbs).map_err(err)?;
    let law = iterated_bm_law(depth).map_err(err)?;
    let fit = fit_law(&c, None).ok();
    Ok(json!({
        "eps": c.eps_grid,
        "p_hat": c.p_hat,
        "ci_low": c.ci_low,
        "ci_high": c.ci_high,
        "law": { "constant": law.constant, "exponent": law.exponent },
        "fit": fit.map(|f| json!({ "exponent": f.exponent_hat, "stderr": f.exponent_stderr, "constant": f.constant_hat })),
    }))
}

/// One path of `kind` (`bm`, `fbm`, `stable`, `bm2` for BM∘BM) with covering numbers of its range.
pub fn path(kind: &str, param: f64, points: usize, seed: u64) -> Result<Value, String> {
    if !(8..=1 << 16).contains(&points) {
        return Err("points must lie in 8..=65536".into());
    }
    let err = |e: smalldev::Error| e.to_string();
    let target = match kind {
        "bm" => Target::process(ProcessSpec::Brownian, points),
        "fbm" => Target::process(ProcessSpec::FbmTwoSided { hurst: param }, points),
        "stable" => Target::process(
            ProcessSpec::StableSymmetric {
                alpha: param,
                normalize_bm: false,
            },
            points,
        ),
        "bm2" => Target::Chain(
            IterationChain::iterated_brownian(2)
                .and_then(|c| c.with_grids(points, 4 * points))
                .map_err(err)?,
        ),
        _ => return Err(format!("unknown process `{kind}`")),
    };
    let sampler = TargetSampler::new(&target, seed).map_err(err)?;
    let p = sampler.composer().compose(&sampler.streams(0)).map_err(err)?.base;
    let range = RangeStats::from_values(&p.values);
    let covers = [0.2, 0.1, 0.05, 0.02, 0.01]
        .iter()
        .map(|&e| Ok(json!({ "eps": e, "n": covering_number(&p.values, e).map_err(err)? })))
        .collect::<Result<Vec<_>, String>>()?;
    Ok(json!({
        "t": p.times(),
        "x": p.values,
        "min": range.inf_val,
        "max": range.sup_val,
        "covering": covers,
    }))
}

#[wasm_bindgen(js_name = constantsTable)]
pub fn constants_table(n_max: usize) -> Result<String, JsValue> {
    to_js(constants(n_max))
}

#[wasm_bindgen(js_name = smallDeviationCurve)]
pub fn small_deviation_curve(
    depth: usize,
    eps_min: f64,
    eps_max: f64,
    count: usize,
    n_samples: u32,
    seed: u64,
) -> Result<String, JsValue> {
    to_js(curve(depth, eps_min, eps_max, count, n_samples, seed))
}

#[wasm_bindgen(js_name = samplePath)]
pub fn sample_path(kind: &str, param: f64, points: usize, seed: u64) -> Result<String, JsValue> {
    to_js(path(kind, param, points, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_rows() {
        let v = constants(3).unwrap();
        assert_eq!(v[1]["tau_exact"], "4/3");
        assert!((v[0]["d"].as_f64().unwrap() - 1.0).abs() < 1e-15);
        assert!(constants(0).is_err());
    }

    #[test]
    fn curve_is_seeded() {
        let a = curve(2, 0.6, 1.2, 4, 500, 7).unwrap();
        assert_eq!(a, curve(2, 0.6, 1.2, 4, 500, 7).unwrap());
        assert_eq!(a["eps"].as_array().unwrap().len(), 4);
        assert!(curve(4, 0.6, 1.2, 4, 500, 7).is_err());
    }

    #[test]
    fn path_and_covers() {
        let v = path("bm2", 0.0, 65, 3).unwrap();
        assert_eq!(v["x"][0], 0.0);
        let n: Vec<u64> = v["covering"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["n"].as_u64().unwrap())
            .collect();
        assert!(n.windows(2).all(|w| w[1] >= w[0]));
        assert!(path("levy", 1.0, 65, 3).is_err());
    }
}
