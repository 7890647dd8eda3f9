//! Covering numbers of realized ranges, entropy-route bounds and local times.

mod bound;
mod covering;
mod local_time;

pub use bound::{
    alpha_time_route, calibrate_c0, entropy_upper_bound_check, stable_abs_cdf, AlphaTimeReport, AlphaTimeSpec,
    EntropyBoundVerdict,
};
pub use covering::{
    covering_number, covering_tail, k_star, CoveringProfile, CoveringTail, CoveringTailConfig, DEFAULT_DELTA,
};
pub use local_time::{
    default_bin_width, lacey_tail_check, local_time_max, LaceyConfig, LaceyResult, LocalTimeEstimate,
};
