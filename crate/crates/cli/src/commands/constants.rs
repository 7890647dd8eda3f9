use std::fmt::Write;

use num_rational::Ratio;
use serde::Serialize;
use smalldev::asymptotics::{
    fbm_tau_rational, iterated_bm_constants, iterated_bm_law, iterated_bm_tau_rational, iterated_fbm_constants,
    parse_decimal,
};

use crate::config::{self, CFile};
use crate::error::CliError;
use crate::output::{to_json, Sink};
use crate::{Common, ConstantsArgs, Format, Outcome};

pub const CONSTANTS_HEADER: &str = "n,hurst,tau_exact,tau,recurrence_constant,law_constant";

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: usize,
    pub hurst: f64,
    /// `p/q`, or empty when the exact value overflows.
    pub tau_exact: String,
    pub tau: f64,
    /// `d_n` for iterated BM, `c_n` for iterated fBM.
    pub recurrence_constant: f64,
    /// Sup-norm constant of the level-`n` law.
    pub law_constant: f64,
}

fn parse_hurst(s: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a decimal or p/q fraction"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => parse_decimal(s).ok_or_else(bad),
    }
}

pub fn rows(args: &ConstantsArgs) -> Result<Vec<Row>, CliError> {
    let exact = |r: Option<Ratio<i64>>| r.map(|r| r.to_string()).unwrap_or_default();
    if let Some(n) = args.iterated_bm {
        let c = iterated_bm_constants(n)?;
        return (1..=n)
            .map(|k| {
                Ok(Row {
                    n: k,
                    hurst: 0.5,
                    tau_exact: exact(iterated_bm_tau_rational(k)),
                    tau: c.tau_seq[k - 1],
                    recurrence_constant: c.const_seq[k - 1],
                    law_constant: iterated_bm_law(k)?.constant,
                })
            })
            .collect();
    }
    let tokens = args.fbm.as_deref().unwrap_or_default();
    let exact_h: Vec<Ratio<i64>> = tokens.iter().map(|s| parse_hurst(s)).collect::<Result<_, _>>()?;
    let hursts: Vec<f64> = exact_h.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
    let file: CFile = match &args.c_of_h {
        Some(p) => config::load(p)?,
        None => CFile::default(),
    };
    let c = iterated_fbm_constants(&hursts, &config::c_table(&file.c_of_h)?)?;
    Ok((1..=c.n)
        .map(|k| Row {
            n: k,
            hurst: hursts[k - 1],
            tau_exact: exact(fbm_tau_rational(&exact_h[..k])),
            tau: c.tau_seq[k - 1],
            recurrence_constant: c.const_seq[k - 1],
            law_constant: c.const_seq[k - 1],
        })
        .collect())
}

pub fn csv(rows: &[Row]) -> String {
    let mut s = format!("{CONSTANTS_HEADER}\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n, r.hurst, r.tau_exact, r.tau, r.recurrence_constant, r.law_constant
        )
        .unwrap();
    }
    s
}

pub fn run(args: &ConstantsArgs, common: &Common) -> Result<Outcome, CliError> {
    let rows = rows(args)?;
    let text = match common.format {
        Format::Csv => csv(&rows),
        Format::Json => to_json(&rows),
    };
    print!("{text}");
    if let Some(dir) = &common.out_dir {
        let mut sink = Sink::new(Some(dir), common.format)?;
        sink.table("constants", csv(&rows), &rows)?;
    }
    Ok(Outcome::Pass)
}
