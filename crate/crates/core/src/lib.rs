//! Simulation and verification toolkit for small-deviation asymptotics of
//! iterated stochastic processes `X(Y(t))`.
//!
//! | Module | Contents |
//! |---|---|
//! | [`process`] | Brownian, fractional Brownian and stable samplers on uniform grids |
//! | [`composition`] | two-sided extension and n-fold compositions |
//! | [`asymptotics`] | closed-form small-deviation exponents and constants |
//! | [`estimator`] | Monte Carlo small-deviation curves, fits and verdicts |
//! | [`entropy`] | covering numbers, local times, entropy-route bounds |
//! | [`report`] | CSV tables and log-log SVG plots |

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod composition;
pub mod entropy;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod process;
pub mod report;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
