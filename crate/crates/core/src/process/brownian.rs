use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_grid, PathSample, UniformGrid};
use crate::error::Result;
use crate::rng::Stream;

/// Brownian motion on `n_points` equally spaced times in `[0, horizon]`.
pub fn sample_brownian(n_points: usize, horizon: f64, stream: &mut Stream) -> Result<PathSample> {
    check_grid(n_points, horizon)?;
    let grid = UniformGrid::on_interval(horizon, n_points);
    let mut values = vec![0.0; n_points];
    fill_brownian(&mut stream.rng, grid.step, 1.0, &mut values);
    Ok(PathSample::new(grid, values, Some(stream.provenance)))
}

/// Overwrite `out` with a path started at 0 whose increments are
/// `N(0, variance_rate * step)`.
pub fn fill_brownian<R: Rng + ?Sized>(rng: &mut R, step: f64, variance_rate: f64, out: &mut [f64]) {
    let sd = (variance_rate * step).sqrt();
    let mut level = 0.0;
    if let Some(first) = out.first_mut() {
        *first = 0.0;
    }
    for v in out.iter_mut().skip(1) {
        let z: f64 = StandardNormal.sample(rng);
        level += sd * z;
        *v = level;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{ModuleTag, StreamId};

    fn stream(rep: u64) -> Stream {
        Stream::new(2024, StreamId::new(rep, ModuleTag::Sampler))
    }

    #[test]
    fn starts_at_zero_and_has_requested_length() {
        let p = sample_brownian(1025, 1.0, &mut stream(3)).unwrap();
        assert_eq!(p.len(), 1025);
        assert_eq!(p.values[0], 0.0);
        assert_eq!(p.grid.end(), 1.0);
        assert!(p.provenance.is_some());
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(sample_brownian(1, 1.0, &mut stream(0)).is_err());
        assert!(sample_brownian(8, 0.0, &mut stream(0)).is_err());
        assert!(sample_brownian(8, f64::NAN, &mut stream(0)).is_err());
    }

    #[test]
    fn endpoint_mean_and_variance() {
        // 1e5 draws of W(1): mean within 3 sd / sqrt(n) ~ 0.0095 (spec allows 0.02),
        // variance within 0.03 (sd of sample variance ~ sqrt(2/n) = 0.0045).
        let n = 100_000;
        let mut s = stream(0);
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let p = sample_brownian(2, 1.0, &mut s).unwrap();
            sum += p.values[1];
            sum2 += p.values[1] * p.values[1];
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn reproducible_for_same_stream() {
        let a = sample_brownian(257, 2.0, &mut stream(9)).unwrap();
        let b = sample_brownian(257, 2.0, &mut stream(9)).unwrap();
        assert_eq!(a, b);
    }
}
