//! Experiment files and the compact process syntax used by flags.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use smalldev::asymptotics::{
    alpha_time_exponent, iterated_bm_law, iterated_fbm_constants, range_sup_translate, true_fbm_law, AsymptoticLaw,
    CTable, NormKind, Translate, BM_SUP_CONSTANT,
};
use smalldev::composition::{IterationChain, OuterMode};
use smalldev::estimator::{log_eps_grid, Target, TolerancePolicy};
use smalldev::process::ProcessSpec;

use crate::error::CliError;

/// Read a TOML file, or JSON when the extension is `.json`.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if json {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|message| CliError::Config {
        path: path.to_path_buf(),
        message: message.trim_end().to_string(),
    })
}

/// `bm`, `fbm:H`, `fbm-true:H`, `stable:A`, `stable-unit:A` or `subordinator:A`.
pub fn parse_process(s: &str) -> Result<ProcessSpec, String> {
    let s = s.trim();
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => {
            let v: f64 = a.trim().parse().map_err(|_| format!("`{a}` is not a number"))?;
            (n.trim(), Some(v))
        }
        None => (s, None),
    };
    let need = |what: &str| arg.ok_or_else(|| format!("`{name}` needs a parameter, e.g. `{name}:{what}`"));
    let spec = match name {
        "bm" | "brownian" => ProcessSpec::Brownian,
        "fbm" => ProcessSpec::FbmTwoSided { hurst: need("0.3")? },
        "fbm-true" => ProcessSpec::FbmTrue { hurst: need("0.3")? },
        "stable" => ProcessSpec::StableSymmetric {
            alpha: need("1.5")?,
            normalize_bm: false,
        },
        "stable-unit" => ProcessSpec::StableSymmetric {
            alpha: need("1.5")?,
            normalize_bm: true,
        },
        "subordinator" => ProcessSpec::StableSubordinator { alpha: need("0.5")? },
        _ => return Err(format!("unknown process `{name}`")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// Explicit values, or `count` points between `min` and `max`.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub values: Option<Vec<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn values(values: Vec<f64>) -> Self {
        Self {
            values: Some(values),
            ..Self::default()
        }
    }

    /// Strictly decreasing grid.
    pub fn descending(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let mut v = match (&self.values, self.min, self.max, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(min), Some(max), Some(count)) => match self.spacing {
                Spacing::Log => log_eps_grid(min, max, count)?,
                Spacing::Linear if count >= 2 && min < max => (0..count)
                    .map(|i| max - (max - min) * i as f64 / (count - 1) as f64)
                    .collect(),
                Spacing::Linear => return Err(CliError::Usage(format!("{name}: need count >= 2 and min < max"))),
            },
            _ => {
                return Err(CliError::Usage(format!(
                    "{name}: give either `values` or all of `min`, `max`, `count`"
                )))
            }
        };
        v.sort_by(|a, b| b.total_cmp(a));
        v.dedup();
        if v.is_empty() || v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(CliError::Usage(format!("{name}: need positive finite values")));
        }
        Ok(v)
    }

    pub fn ascending(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let mut v = self.descending(name)?;
        v.reverse();
        Ok(v)
    }
}

/// One process, or a chain when `specs` has several entries (inner first).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub specs: Vec<ProcessSpec>,
    /// Grid points of a single process, or of the innermost process of a chain.
    pub grid: Option<usize>,
    pub grid_outer_per_unit: Option<usize>,
    pub outer_mode: Option<OuterMode>,
}

pub const DEFAULT_PROCESS_GRID: usize = 1 << 12;

impl TargetSpec {
    pub fn build(&self) -> Result<Target, CliError> {
        match self.specs.as_slice() {
            [] => Err(CliError::Usage("target.specs is empty".into())),
            [spec] => {
                let target = Target::process(*spec, self.grid.unwrap_or(DEFAULT_PROCESS_GRID));
                target.to_chain()?;
                Ok(target)
            }
            specs => {
                let mut chain = IterationChain::new(specs.to_vec())?;
                if let Some(mode) = self.outer_mode {
                    chain.outer_mode = mode;
                }
                let inner = self.grid.unwrap_or(chain.grid_inner);
                let outer = self.grid_outer_per_unit.unwrap_or(chain.grid_outer_per_unit);
                let chain = chain.with_grids(inner, outer)?;
                Ok(Target::Chain(chain))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CEntry {
    pub hurst: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CFile {
    #[serde(default)]
    pub c_of_h: Vec<CEntry>,
}

/// The default table (`c(1/2) = π²/8`) with extra entries.
pub fn c_table(entries: &[CEntry]) -> Result<CTable, CliError> {
    let mut t = CTable::default();
    for e in entries {
        t.insert(e.hurst, e.c)?;
    }
    Ok(t)
}

/// A named law, or an explicit one.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawSpec {
    Brownian,
    IteratedBm {
        n: usize,
    },
    IteratedFbm {
        hursts: Vec<f64>,
        #[serde(default)]
        c_of_h: Vec<CEntry>,
    },
    TrueFbm {
        hurst: f64,
        kappa_inner: f64,
        tau_inner: f64,
        #[serde(default)]
        c_of_h: Vec<CEntry>,
    },
    AlphaTime {
        alpha: f64,
        beta: f64,
        #[serde(default)]
        subordinator: bool,
    },
    Explicit {
        /// Omit for an order-only law.
        constant: Option<f64>,
        exponent: f64,
        #[serde(default = "sup_abs")]
        norm: NormKind,
    },
}

fn sup_abs() -> NormKind {
    NormKind::SupAbs
}

impl LawSpec {
    /// The law, translated to `norm` if it was stated for the other norm.
    pub fn resolve(&self, norm: NormKind) -> Result<AsymptoticLaw, CliError> {
        let law = match self {
            LawSpec::Brownian => AsymptoticLaw::new(BM_SUP_CONSTANT, 2.0, NormKind::SupAbs)?,
            LawSpec::IteratedBm { n } => iterated_bm_law(*n)?,
            LawSpec::IteratedFbm { hursts, c_of_h } => iterated_fbm_constants(hursts, &c_table(c_of_h)?)?.law(),
            LawSpec::TrueFbm {
                hurst,
                kappa_inner,
                tau_inner,
                c_of_h,
            } => true_fbm_law(*hurst, *kappa_inner, *tau_inner, &c_table(c_of_h)?)?,
            LawSpec::AlphaTime {
                alpha,
                beta,
                subordinator,
            } => AsymptoticLaw::weak(alpha_time_exponent(*alpha, *beta, *subordinator)?, NormKind::SupAbs)?,
            LawSpec::Explicit {
                constant,
                exponent,
                norm,
            } => match constant {
                Some(c) => AsymptoticLaw::new(*c, *exponent, *norm)?,
                None => AsymptoticLaw::weak(*exponent, *norm)?,
            },
        };
        Ok(match (law.norm_kind, norm) {
            (NormKind::SupAbs, NormKind::Range) => range_sup_translate(law, Translate::SupToRange)?,
            (NormKind::Range, NormKind::SupAbs) => range_sup_translate(law, Translate::RangeToSup)?,
            _ => law,
        })
    }
}

fn default_true() -> bool {
    true
}

/// `smalldev estimate` experiment file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateFile {
    pub target: TargetSpec,
    pub eps: GridSpec,
    pub n_samples: u64,
    #[serde(default = "sup_abs")]
    pub norm: NormKind,
    pub law: Option<LawSpec>,
    #[serde(default)]
    pub tolerance: TolerancePolicy,
    /// Repeat on a grid with half the step to measure discretization bias.
    #[serde(default = "default_true")]
    pub refine: bool,
    pub stem: Option<String>,
    #[serde(default = "default_true")]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    Profile,
    Covering,
    Lacey,
    AlphaTime,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::Profile => "profile",
            Study::Covering => "covering",
            Study::Lacey => "lacey",
            Study::AlphaTime => "alpha_time",
        }
    }
}

/// `smalldev entropy` study file; every entry has a per-study default.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyFile {
    pub study: Option<Study>,
    pub process: Option<ProcessSpec>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub subordinator: Option<bool>,
    pub eps: Option<GridSpec>,
    pub u: Option<GridSpec>,
    pub delta: Option<f64>,
    pub n_samples: Option<u64>,
    pub grid: Option<usize>,
    pub grid_outer_per_unit: Option<usize>,
    pub bin_width: Option<f64>,
    /// Accepted range for the local-time tail slope.
    pub slope_band: Option<(f64, f64)>,
    pub tolerance: Option<TolerancePolicy>,
    pub stem: Option<String>,
    pub svg: Option<bool>,
}
