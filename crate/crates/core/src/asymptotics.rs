//! Closed-form small-deviation exponents and constants.
//!
//! A law `(k, τ)` means `-log P(‖Z‖ ≤ ε) ~ k ε^{-τ}` as `ε → 0`.

use std::f64::consts::PI;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Small-deviation constant of Brownian motion under the sup norm.
pub const BM_SUP_CONSTANT: f64 = PI * PI / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `sup_t |Z(t)|`
    SupAbs,
    /// `sup_{s,t} |Z(t) - Z(s)|`
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLaw {
    pub constant: f64,
    pub exponent: f64,
    pub norm_kind: NormKind,
    /// False for order-only laws, whose `constant` is a placeholder 1.
    pub constant_known: bool,
}

impl AsymptoticLaw {
    pub fn new(constant: f64, exponent: f64, norm_kind: NormKind) -> Result<Self> {
        positive("constant", constant)?;
        positive("exponent", exponent)?;
        Ok(Self {
            constant,
            exponent,
            norm_kind,
            constant_known: true,
        })
    }

    /// Order-only law `-log P ≈ ε^{-exponent}`.
    pub fn weak(exponent: f64, norm_kind: NormKind) -> Result<Self> {
        positive("exponent", exponent)?;
        Ok(Self {
            constant: 1.0,
            exponent,
            norm_kind,
            constant_known: false,
        })
    }

    /// Leading-order `-log P(‖Z‖ ≤ ε)`.
    pub fn neg_log_prob(&self, eps: f64) -> f64 {
        self.constant * eps.powf(-self.exponent)
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(param(name, format!("must be positive and finite, got {x}")))
    }
}

/// Exponent of `X∘Y` for `θ`-order outer, `H`-self-similar outer and `τ`-order inner.
pub fn combine_weak(theta: f64, hurst_outer: f64, tau_inner: f64) -> Result<f64> {
    positive("theta", theta)?;
    positive("hurst_outer", hurst_outer)?;
    positive("tau_inner", tau_inner)?;
    Ok(1.0 / (1.0 / theta + hurst_outer / tau_inner))
}

/// Sup-norm law of `X∘Y` from the outer constant `k` (exponent `θ = 1/H`) and the
/// inner range law `(κ, τ)`.
pub fn combine_strong(k_outer: f64, tau_inner: f64, kappa_inner: f64, theta: f64) -> Result<AsymptoticLaw> {
    positive("k_outer", k_outer)?;
    positive("tau_inner", tau_inner)?;
    positive("kappa_inner", kappa_inner)?;
    positive("theta", theta)?;
    let t = tau_inner;
    let w = t / (1.0 + t);
    let log_c = kappa_inner.ln() / (1.0 + t) - w * t.ln() + (1.0 + t).ln() + w * k_outer.ln();
    AsymptoticLaw::new(log_c.exp(), theta * w, NormKind::SupAbs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Translate {
    RangeToSup,
    SupToRange,
}

/// Convert between range and sup-norm constants (factor `2^{∓τ}`).
pub fn range_sup_translate(law: AsymptoticLaw, direction: Translate) -> Result<AsymptoticLaw> {
    let (from, to, sign) = match direction {
        Translate::RangeToSup => (NormKind::Range, NormKind::SupAbs, -1.0),
        Translate::SupToRange => (NormKind::SupAbs, NormKind::Range, 1.0),
    };
    if law.norm_kind != from {
        return Err(param("law", format!("expected a {from:?} law for {direction:?}")));
    }
    Ok(AsymptoticLaw {
        constant: law.constant * (sign * law.exponent).exp2(),
        norm_kind: to,
        ..law
    })
}

/// Laplace-transform order `1/(1 + p/τ)` for `E exp(-λ ‖Y‖^p)` when `‖Y‖` has order `τ`.
pub fn tauberian_laplace_exponent(tau: f64, p: f64) -> Result<f64> {
    positive("tau", tau)?;
    positive("p", p)?;
    Ok(1.0 / (1.0 + p / tau))
}

/// Small-deviation exponent of `β`-stable outer time-changed by an `α`-stable inner process.
pub fn alpha_time_exponent(alpha: f64, beta: f64, inner_is_subordinator: bool) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(param("alpha", format!("must lie in (0,2], got {alpha}")));
    }
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(param("beta", format!("must lie in (0,2], got {beta}")));
    }
    if inner_is_subordinator {
        if alpha >= 1.0 {
            return Err(param("alpha", format!("a subordinator needs alpha < 1, got {alpha}")));
        }
        Ok(beta * alpha)
    } else {
        Ok(beta * alpha / (1.0 + alpha))
    }
}

/// Table of user-supplied fBM sup-norm constants `c(H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CTable {
    entries: Vec<(f64, f64)>,
}

impl Default for CTable {
    /// Only `c(1/2) = π²/8` is known in closed form.
    fn default() -> Self {
        Self {
            entries: vec![(0.5, BM_SUP_CONSTANT)],
        }
    }
}

impl CTable {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn insert(&mut self, hurst: f64, c: f64) -> Result<()> {
        crate::process::check_hurst(hurst)?;
        positive("c", c)?;
        match self.entries.iter_mut().find(|e| e.0 == hurst) {
            Some(e) => e.1 = c,
            None => self.entries.push((hurst, c)),
        }
        Ok(())
    }

    pub fn with(mut self, hurst: f64, c: f64) -> Result<Self> {
        self.insert(hurst, c)?;
        Ok(self)
    }

    pub fn get(&self, hurst: f64) -> Result<f64> {
        self.entries
            .iter()
            .find(|e| (e.0 - hurst).abs() <= 1e-12)
            .map(|e| e.1)
            .ok_or(Error::MissingConstant(hurst))
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationConstants {
    pub n: usize,
    pub tau_seq: Vec<f64>,
    pub const_seq: Vec<f64>,
    pub hursts: Vec<f64>,
    pub c_of_h: CTable,
}

impl IterationConstants {
    pub fn law(&self) -> AsymptoticLaw {
        AsymptoticLaw {
            constant: self.const_seq[self.n - 1],
            exponent: self.tau_seq[self.n - 1],
            norm_kind: NormKind::SupAbs,
            constant_known: true,
        }
    }
}

/// `τ_n = 1/(1 - 2^{-n})`.
pub fn iterated_bm_tau(n: usize) -> f64 {
    1.0 / -(-(n as f64) * std::f64::consts::LN_2).exp_m1()
}

/// `τ_n` and `d_n` for `n`-iterated Brownian motion from the recurrence.
pub fn iterated_bm_constants(n: usize) -> Result<IterationConstants> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let mut tau_seq = vec![2.0];
    let mut log_d = vec![0.0_f64];
    for j in 2..=n {
        let t = tau_seq[j - 2];
        let w = t / (1.0 + t);
        log_d.push(log_d[j - 2] / (1.0 + t) + w * (2.0 / t).ln() + (1.0 + t).ln());
        tau_seq.push(iterated_bm_tau(j));
    }
    Ok(IterationConstants {
        n,
        tau_seq,
        const_seq: log_d.into_iter().map(f64::exp).collect(),
        hursts: vec![0.5; n],
        c_of_h: CTable::default(),
    })
}

/// `d_n = (2^n - 1) / (2^{n-3} 2^{(n+1)/(2^n-1)})`, evaluated in base-2 logs.
pub fn iterated_bm_closed_form(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let nf = n as f64;
    // log2(2^n - 1) = n + log2(1 - 2^{-n})
    let log2_num = nf + (-(-nf).exp2()).ln_1p() / std::f64::consts::LN_2;
    let denom = (-(-nf * std::f64::consts::LN_2).exp_m1()) * nf.exp2();
    let log2_d = log2_num - (nf - 3.0) - (nf + 1.0) / denom;
    Ok(log2_d.exp2())
}

/// Sup-norm law of `n`-iterated two-sided Brownian motion.
pub fn iterated_bm_law(n: usize) -> Result<AsymptoticLaw> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let nf = n as f64;
    let one_minus = -(-nf * std::f64::consts::LN_2).exp_m1();
    let two_n_minus_1 = one_minus * nf.exp2();
    let constant = PI * PI * one_minus * (-(nf + 1.0) / two_n_minus_1).exp2();
    AsymptoticLaw::new(constant, 1.0 / one_minus, NormKind::SupAbs)
}

/// `τ_n` and `c_n` for `n`-iterated two-sided fBM with Hurst indices `H_1..H_n` (inner first).
pub fn iterated_fbm_constants(hursts: &[f64], c_of_h: &CTable) -> Result<IterationConstants> {
    if hursts.is_empty() {
        return Err(param("hursts", "need at least one Hurst index"));
    }
    for &h in hursts {
        crate::process::check_hurst(h)?;
    }
    let cs: Vec<f64> = hursts.iter().map(|&h| c_of_h.get(h)).collect::<Result<_>>()?;
    let mut tau_seq = vec![1.0 / hursts[0]];
    let mut const_seq = vec![cs[0]];
    for j in 1..hursts.len() {
        let (t, c_prev) = (tau_seq[j - 1], const_seq[j - 1]);
        let w = t / (1.0 + t);
        let log_c = (1.0 + t).ln() + w * (c_prev.ln() / t + (2.0 * cs[j] / t).ln());
        const_seq.push(log_c.exp());
        tau_seq.push(1.0 / (hursts[j] * (1.0 + 1.0 / t)));
    }
    Ok(IterationConstants {
        n: hursts.len(),
        tau_seq,
        const_seq,
        hursts: hursts.to_vec(),
        c_of_h: c_of_h.clone(),
    })
}

/// Sup-norm law of true (dependent-wing) fBM composed with an inner process of range law `(κ, τ)`.
pub fn true_fbm_law(hurst: f64, kappa_inner: f64, tau_inner: f64, c_of_h: &CTable) -> Result<AsymptoticLaw> {
    crate::process::check_hurst(hurst)?;
    combine_strong(c_of_h.get(hurst)?, tau_inner, kappa_inner, 1.0 / hurst)
}

/// Exact rational `τ_n = 2^n / (2^n - 1)`, for `n ≤ 62`.
pub fn iterated_bm_tau_rational(n: usize) -> Option<Ratio<i64>> {
    if n == 0 || n > 62 {
        return None;
    }
    let p = 1i64 << n;
    Some(Ratio::new(p, p - 1))
}

/// Parse a terminating decimal such as `"0.375"` into an exact fraction.
pub fn parse_decimal(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let num: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    Some(Ratio::new(whole.checked_mul(den)?.checked_add(num)?, den))
}

/// Exact `τ_n` from `1/τ_n = Σ_j H_j···H_n`; `None` on overflow.
pub fn fbm_tau_rational(hursts: &[Ratio<i64>]) -> Option<Ratio<i64>> {
    let mut inv = Ratio::zero();
    for h in hursts {
        inv = inv.checked_add(&Ratio::one())?.checked_mul(h)?;
    }
    if inv.is_zero() {
        None
    } else {
        Some(inv.recip())
    }
}
