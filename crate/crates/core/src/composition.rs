//! Two-sided extension and iterated compositions `X_n(...X_2(X_1(t)))` on `[0,1]`.
//!
//! Level 1 is sampled on the inner grid. Each further level samples its outer
//! process on a grid covering the realized range `[N, M]` of the level below (one
//! grid step of margin on each side) and evaluates it there by linear
//! interpolation. While every level so far is continuous, the range of the next
//! level is the extremes of the outer grid over `[N, M]`, the grid analogue of
//! `Y([0,1]) = [N, M]`. Once a level has jumps the realized set is only the
//! sampled points, and Lévy outer processes are then drawn exactly at those points.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::process::{
    fill_brownian, interpolate_uniform, FbmSampler, PathSample, ProcessSpec, RangeStats, StableMode, StableSampler,
};
use crate::rng::{ReplicateStreams, Stream};

/// Outer grids never have fewer points than this over the realized range.
pub const MIN_OUTER_POINTS: usize = 64;
/// Outer grids are coarsened rather than exceed this many points per branch.
pub const MAX_OUTER_POINTS: usize = 1 << 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OuterMode {
    #[default]
    TwoSidedIndependent,
    TrueFbm,
}

/// An n-fold composition, inner process first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationChain {
    pub specs: Vec<ProcessSpec>,
    #[serde(default)]
    pub outer_mode: OuterMode,
    #[serde(default = "default_grid_inner")]
    pub grid_inner: usize,
    #[serde(default = "default_grid_outer")]
    pub grid_outer_per_unit: usize,
}

fn default_grid_inner() -> usize {
    1 << 10
}

fn default_grid_outer() -> usize {
    1 << 12
}

impl IterationChain {
    /// Chain with default grids; the outer mode follows the outermost spec.
    pub fn new(specs: Vec<ProcessSpec>) -> Result<Self> {
        let outer_mode = match specs.last() {
            Some(ProcessSpec::FbmTrue { .. }) if specs.len() > 1 => OuterMode::TrueFbm,
            _ => OuterMode::TwoSidedIndependent,
        };
        let chain = Self {
            specs,
            outer_mode,
            grid_inner: default_grid_inner(),
            grid_outer_per_unit: default_grid_outer(),
        };
        chain.validate()?;
        Ok(chain)
    }

    /// `n` independent two-sided Brownian motions.
    pub fn iterated_brownian(n: usize) -> Result<Self> {
        Self::new(vec![ProcessSpec::Brownian; n])
    }

    pub fn with_grids(mut self, grid_inner: usize, grid_outer_per_unit: usize) -> Result<Self> {
        self.grid_inner = grid_inner;
        self.grid_outer_per_unit = grid_outer_per_unit;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.specs.is_empty() {
            return Err(param("specs", "chain needs at least one process"));
        }
        for s in &self.specs {
            s.validate()?;
        }
        if self.grid_inner < 2 {
            return Err(param("grid_inner", "need at least 2 points"));
        }
        if self.grid_outer_per_unit == 0 {
            return Err(param("grid_outer_per_unit", "must be positive"));
        }
        let n = self.specs.len();
        for (i, s) in self.specs.iter().enumerate() {
            if matches!(s, ProcessSpec::FbmTrue { .. }) && i + 1 != n {
                return Err(param("specs", "only the outermost process may be a true fBM"));
            }
        }
        let last_true = matches!(self.specs[n - 1], ProcessSpec::FbmTrue { .. });
        match self.outer_mode {
            OuterMode::TrueFbm if !last_true || n < 2 => {
                return Err(param(
                    "outer_mode",
                    "true_fbm needs an outermost FbmTrue spec above an inner level",
                ))
            }
            OuterMode::TwoSidedIndependent if last_true && n > 1 => {
                return Err(param(
                    "outer_mode",
                    "an outermost FbmTrue spec requires outer_mode = true_fbm",
                ))
            }
            _ => {}
        }
        if self.outer_mode == OuterMode::TrueFbm && !self.specs[..n - 1].iter().all(|s| s.is_continuous()) {
            return Err(param(
                "outer_mode",
                "true fBM composition is only supported over continuous inner processes",
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn is_continuous(&self) -> bool {
        self.specs.iter().all(|s| s.is_continuous())
    }
}

/// Product of the component self-similarity indices.
pub fn chain_self_similarity_index(chain: &IterationChain) -> f64 {
    chain.specs.iter().map(|s| s.self_similarity_index()).product()
}

/// Accessor for a process on the whole line built from two one-sided branches.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedPath {
    pos: PathSample,
    neg: PathSample,
}

/// Join `branch_pos` (for `t >= 0`) and `branch_neg` (evaluated at `-t` for `t < 0`).
pub fn extend_two_sided(branch_pos: PathSample, branch_neg: PathSample) -> Result<TwoSidedPath> {
    for (name, b) in [("branch_pos", &branch_pos), ("branch_neg", &branch_neg)] {
        if b.grid.start != 0.0 || b.origin != 0 || b.values.first() != Some(&0.0) {
            return Err(param(name, "branch must start at time 0 with value 0"));
        }
    }
    let (a, b) = (branch_pos.grid.step, branch_neg.grid.step);
    if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
        return Err(param(
            "branch_neg",
            format!("grid step {b} differs from positive branch step {a}"),
        ));
    }
    Ok(TwoSidedPath {
        pos: branch_pos,
        neg: branch_neg,
    })
}

impl TwoSidedPath {
    /// Linear interpolation at `t`; `None` outside the covered span.
    pub fn eval(&self, t: f64) -> Option<f64> {
        if t >= 0.0 {
            self.pos.interpolate(t)
        } else {
            self.neg.interpolate(-t)
        }
    }

    pub fn span(&self) -> (f64, f64) {
        (-self.neg.grid.end(), self.pos.grid.end())
    }

    pub fn positive(&self) -> &PathSample {
        &self.pos
    }

    pub fn negative(&self) -> &PathSample {
        &self.neg
    }
}

/// How a level was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluation {
    /// Innermost level, sampled on the inner grid.
    Direct,
    /// Outer grid over the realized range; range taken over the whole interval.
    GridSweep,
    /// Outer grid over the realized range; range taken at the inner points only.
    GridInterpolation,
    /// Lévy outer process drawn exactly at the realized points.
    PointSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub range: RangeStats,
    /// Span of the outer sampling grid (the inner time interval at level 1).
    pub span: (f64, f64),
    /// Realized range of the level below, i.e. the set this level was evaluated on.
    pub domain: (f64, f64),
    pub evaluation: Evaluation,
}

/// One realization of an iterated process on `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedPath {
    pub base: PathSample,
    pub levels: Vec<LevelRecord>,
    /// Some level had an empty range; `base` is the zero path.
    pub degenerate: bool,
    /// Every level is continuous, so level ranges are full-interval sweeps.
    pub continuous: bool,
    /// An outer grid was coarsened below the requested resolution.
    pub coarsened: bool,
}

impl ComposedPath {
    pub fn intermediate_ranges(&self) -> Vec<RangeStats> {
        self.levels.iter().map(|l| l.range).collect()
    }

    fn final_range(&self) -> RangeStats {
        if self.degenerate {
            return RangeStats::from_extremes(0.0, 0.0);
        }
        self.levels
            .last()
            .map(|l| l.range)
            .unwrap_or_else(|| RangeStats::from_values(&self.base.values))
    }

    /// `sup_t |Z(t)|` on the grid.
    pub fn sup_abs(&self) -> f64 {
        self.final_range().sup_abs
    }

    /// `sup_{s,t} |Z(t) - Z(s)|` on the grid.
    pub fn range_norm(&self) -> f64 {
        self.final_range().range
    }
}

enum LevySampler {
    Brownian,
    Stable(StableSampler),
}

impl LevySampler {
    fn for_spec(spec: &ProcessSpec) -> Option<Result<Self>> {
        match *spec {
            ProcessSpec::Brownian => Some(Ok(LevySampler::Brownian)),
            ProcessSpec::StableSymmetric { alpha, normalize_bm } => Some(
                StableSampler::new(alpha, StableMode::Symmetric)
                    .map(|s| LevySampler::Stable(s.normalized(normalize_bm))),
            ),
            ProcessSpec::StableSubordinator { alpha } => {
                Some(StableSampler::new(alpha, StableMode::Subordinator).map(LevySampler::Stable))
            }
            _ => None,
        }
    }

    fn increment<R: Rng + ?Sized>(&self, rng: &mut R, dt: f64) -> f64 {
        match self {
            LevySampler::Brownian => {
                let z: f64 = StandardNormal.sample(rng);
                dt.sqrt() * z
            }
            LevySampler::Stable(s) => s.increment(rng, dt),
        }
    }

    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, step: f64, out: &mut [f64]) {
        match self {
            LevySampler::Brownian => fill_brownian(rng, step, 1.0, out),
            LevySampler::Stable(s) => s.fill_path(rng, step, out),
        }
    }
}

type FbmKey = (u64, usize);

/// Samples compositions of a fixed chain; caches fBM samplers across replicates.
pub struct Composer {
    chain: IterationChain,
    fbm_cache: Mutex<HashMap<FbmKey, Arc<FbmSampler>>>,
}

const FBM_CACHE_LIMIT: usize = 64;

impl Composer {
    pub fn new(chain: IterationChain) -> Result<Self> {
        chain.validate()?;
        Ok(Self {
            chain,
            fbm_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn chain(&self) -> &IterationChain {
        &self.chain
    }

    /// fBM sampler with at least `n_points` points; outer sizes are rounded to `2^k + 1`.
    fn fbm_sampler(&self, hurst: f64, n_points: usize, exact: bool) -> Result<Arc<FbmSampler>> {
        let n = if exact {
            n_points
        } else {
            (n_points - 1).next_power_of_two() + 1
        };
        let key = (hurst.to_bits(), n);
        if let Some(s) = self.fbm_cache.lock().unwrap().get(&key) {
            return Ok(Arc::clone(s));
        }
        let sampler = Arc::new(FbmSampler::new(hurst, n)?);
        let mut cache = self.fbm_cache.lock().unwrap();
        if cache.len() >= FBM_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&sampler));
        Ok(sampler)
    }

    fn sample_branch(&self, spec: &ProcessSpec, n_points: usize, step: f64, stream: &mut Stream) -> Result<Vec<f64>> {
        match *spec {
            ProcessSpec::FbmTwoSided { hurst } | ProcessSpec::FbmTrue { hurst } => {
                let sampler = self.fbm_sampler(hurst, n_points, false)?;
                let mut out = vec![0.0; sampler.n_points()];
                sampler.fill_path(&mut stream.rng, step, &mut out);
                Ok(out)
            }
            _ => {
                let levy = LevySampler::for_spec(spec).expect("non-fBM specs are Lévy")?;
                let mut out = vec![0.0; n_points];
                levy.fill(&mut stream.rng, step, &mut out);
                Ok(out)
            }
        }
    }

    /// One realization using the streams of one replicate.
    pub fn compose(&self, streams: &ReplicateStreams) -> Result<ComposedPath> {
        let mut stream = streams.stream(0, 0);
        let base = match self.chain.specs[0] {
            ProcessSpec::FbmTwoSided { hurst } | ProcessSpec::FbmTrue { hurst } => self
                .fbm_sampler(hurst, self.chain.grid_inner, true)?
                .sample(1.0, &mut stream)?,
            spec => spec.sample(self.chain.grid_inner, 1.0, &mut stream)?,
        };
        self.compose_over(base, streams)
    }

    /// Evaluate the outer levels of the chain over a supplied innermost path.
    pub fn compose_over(&self, base: PathSample, streams: &ReplicateStreams) -> Result<ComposedPath> {
        let chain = &self.chain;
        let first = chain.specs[0];
        let mut values = base.values.clone();
        let mut levels = vec![LevelRecord {
            range: RangeStats::from_values(&values),
            span: (0.0, 1.0),
            domain: (0.0, 1.0),
            evaluation: Evaluation::Direct,
        }];
        let mut continuous = first.is_continuous();
        let mut coarsened = false;

        for (j, spec) in chain.specs.iter().enumerate().skip(1) {
            let below = levels[j - 1].range;
            let (lo, hi) = (below.inf_val, below.sup_val);
            if !(hi > lo) {
                return Ok(ComposedPath {
                    base: PathSample {
                        values: vec![0.0; base.len()],
                        ..base
                    },
                    levels,
                    degenerate: true,
                    continuous,
                    coarsened,
                });
            }
            let level = j as u8;
            let record = if !continuous && spec.is_levy() {
                let levy = LevySampler::for_spec(spec).expect("checked is_levy")?;
                eval_point_set(
                    &levy,
                    &mut values,
                    &mut streams.stream(level, 0),
                    &mut streams.stream(level, 1),
                );
                LevelRecord {
                    range: RangeStats::from_values(&values),
                    span: (lo, hi),
                    domain: (lo, hi),
                    evaluation: Evaluation::PointSet,
                }
            } else {
                let (record, was_coarsened) =
                    self.eval_on_grid(spec, lo, hi, continuous, &mut values, streams, level)?;
                coarsened |= was_coarsened;
                record
            };
            levels.push(record);
            continuous &= spec.is_continuous();
        }

        Ok(ComposedPath {
            base: PathSample { values, ..base },
            levels,
            degenerate: false,
            continuous,
            coarsened,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn eval_on_grid(
        &self,
        spec: &ProcessSpec,
        lo: f64,
        hi: f64,
        sweep: bool,
        values: &mut [f64],
        streams: &ReplicateStreams,
        level: u8,
    ) -> Result<(LevelRecord, bool)> {
        let width = hi - lo;
        let mut step = (1.0 / self.chain.grid_outer_per_unit as f64).min(width / MIN_OUTER_POINTS as f64);
        let mut coarsened = false;
        if width / step > MAX_OUTER_POINTS as f64 {
            step = width / MAX_OUTER_POINTS as f64;
            coarsened = true;
        }
        let k_pos = (hi.max(0.0) / step).ceil() as usize + 1;
        let k_neg = ((-lo).max(0.0) / step).ceil() as usize + 1;

        let outer = if self.chain.outer_mode == OuterMode::TrueFbm && level as usize + 1 == self.chain.len() {
            let hurst = match *spec {
                ProcessSpec::FbmTrue { hurst } => hurst,
                _ => unreachable!("validated chain"),
            };
            let sampler = self.fbm_sampler(hurst, k_neg + k_pos + 1, false)?;
            let mut out = vec![0.0; sampler.n_points()];
            sampler.fill_true(&mut streams.stream(level, 0).rng, step, k_neg, &mut out);
            Outer::Single {
                start: -(k_neg as f64) * step,
                step,
                values: out,
            }
        } else {
            let pos = self.sample_branch(spec, k_pos + 1, step, &mut streams.stream(level, 0))?;
            let neg = self.sample_branch(spec, k_neg + 1, step, &mut streams.stream(level, 1))?;
            Outer::TwoSided { step, pos, neg }
        };

        let span = outer.span();
        for v in values.iter_mut() {
            *v = outer
                .eval(*v)
                .ok_or_else(|| Error::Simulation(format!("inner value {v} outside outer grid span {span:?}")))?;
        }
        let range = if sweep {
            let (a, b) = outer.extremes_over(lo, hi);
            RangeStats::from_extremes(a, b)
        } else {
            RangeStats::from_values(values)
        };
        Ok((
            LevelRecord {
                range,
                span,
                domain: (lo, hi),
                evaluation: if sweep {
                    Evaluation::GridSweep
                } else {
                    Evaluation::GridInterpolation
                },
            },
            coarsened,
        ))
    }
}

enum Outer {
    TwoSided { step: f64, pos: Vec<f64>, neg: Vec<f64> },
    Single { start: f64, step: f64, values: Vec<f64> },
}

impl Outer {
    fn eval(&self, t: f64) -> Option<f64> {
        match self {
            Outer::TwoSided { step, pos, neg } => {
                if t >= 0.0 {
                    interpolate_uniform(0.0, *step, pos, t)
                } else {
                    interpolate_uniform(0.0, *step, neg, -t)
                }
            }
            Outer::Single { start, step, values } => interpolate_uniform(*start, *step, values, t),
        }
    }

    fn span(&self) -> (f64, f64) {
        match self {
            Outer::TwoSided { step, pos, neg } => (-((neg.len() - 1) as f64) * step, (pos.len() - 1) as f64 * step),
            Outer::Single { start, step, values } => (*start, start + (values.len() - 1) as f64 * step),
        }
    }

    /// Extremes of the piecewise-linear outer path over `[lo, hi]`, which contains 0.
    fn extremes_over(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut acc = (f64::INFINITY, f64::NEG_INFINITY);
        let mut push = |v: f64| {
            acc.0 = acc.0.min(v);
            acc.1 = acc.1.max(v);
        };
        match self {
            Outer::TwoSided { step, pos, neg } => {
                let ip = ((hi.max(0.0) / step).floor() as usize).min(pos.len() - 1);
                pos[..=ip].iter().copied().for_each(&mut push);
                let in_ = (((-lo).max(0.0) / step).floor() as usize).min(neg.len() - 1);
                neg[..=in_].iter().copied().for_each(&mut push);
            }
            Outer::Single { start, step, values } => {
                let a = (((lo - start) / step).ceil().max(0.0)) as usize;
                let b = (((hi - start) / step).floor() as usize).min(values.len() - 1);
                if a <= b {
                    values[a..=b].iter().copied().for_each(&mut push);
                }
            }
        }
        for end in [lo, hi] {
            if let Some(v) = self.eval(end) {
                push(v);
            }
        }
        acc
    }
}

/// Replace each inner value `y` by an exact draw of the two-sided Lévy process at `y`.
fn eval_point_set(levy: &LevySampler, values: &mut [f64], pos_stream: &mut Stream, neg_stream: &mut Stream) {
    let mut pos: Vec<(f64, usize)> = Vec::new();
    let mut neg: Vec<(f64, usize)> = Vec::new();
    for (i, &y) in values.iter().enumerate() {
        if y > 0.0 {
            pos.push((y, i));
        } else if y < 0.0 {
            neg.push((-y, i));
        }
    }
    let mut out = vec![0.0; values.len()];
    for (points, stream) in [(&mut pos, pos_stream), (&mut neg, neg_stream)] {
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut at = 0.0;
        let mut level = 0.0;
        for &(y, i) in points.iter() {
            if y > at {
                level += levy.increment(&mut stream.rng, y - at);
                at = y;
            }
            out[i] = level;
        }
    }
    values.copy_from_slice(&out);
}

/// Draw the two-sided Lévy process `spec` exactly at `points`, in place.
/// Positive and negative arguments use the independent branches `pos` and `neg`.
pub fn levy_at_points(spec: &ProcessSpec, points: &mut [f64], pos: &mut Stream, neg: &mut Stream) -> Result<()> {
    let levy =
        LevySampler::for_spec(spec).ok_or_else(|| param("spec", "exact point evaluation needs a Lévy process"))??;
    eval_point_set(&levy, points, pos, neg);
    Ok(())
}

/// One realization of `chain` for the given replicate streams.
pub fn compose(chain: &IterationChain, streams: &ReplicateStreams) -> Result<ComposedPath> {
    Composer::new(chain.clone())?.compose(streams)
}
