//! Path generation: Brownian motion, partial-sum processes, test signals and
//! the white-noise and regression observation models.

mod path;
mod rng;
mod signal;

use rand::Rng;

pub use path::{partial_sum_polygonal, partial_sum_step, Observations, PrefixSums, SampledPath};
pub use rng::{splitmix64, NoiseFamily, RngSpec};
pub use signal::{flip_blocks, SignalSpec};

use crate::error::{domain, Error, Result};

/// Brownian motion on the grid `i/N` with increments `N(0, I_d / N)`.
pub fn sample_brownian(grid: usize, dim: usize, rng: &RngSpec) -> Result<SampledPath> {
    brownian_with(grid, dim, &mut rng.rng())
}

pub fn brownian_with<R: Rng + ?Sized>(grid: usize, dim: usize, rng: &mut R) -> Result<SampledPath> {
    if grid == 0 {
        return Err(Error::InvalidParameter("grid size must be >= 1".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let sd = 1.0 / (grid as f64).sqrt();
    let mut values = vec![0.0; (grid + 1) * dim];
    for i in 1..=grid {
        for j in 0..dim {
            let step = sd * NoiseFamily::Gaussian.draw(rng);
            values[i * dim + j] = values[(i - 1) * dim + j] + step;
        }
    }
    SampledPath::new(grid, dim, values)
}

/// White-noise observation `Y(u) = √n_drift · F(u) + W(u)` on the grid of
/// `noise`, using the exact antiderivative of the signal.
pub fn white_noise_path(
    spec: &SignalSpec,
    n_drift: f64,
    noise: SampledPath,
) -> Result<SampledPath> {
    check_drift(n_drift)?;
    let mut path = noise;
    if n_drift > 0.0 && !spec.is_zero() {
        let drift = spec.antiderivative_on_grid(path.grid());
        path.add_drift(&drift, n_drift.sqrt())?;
    }
    Ok(path)
}

pub fn sample_white_noise_path(
    spec: &SignalSpec,
    n_drift: f64,
    grid: usize,
    rng: &RngSpec,
) -> Result<SampledPath> {
    check_drift(n_drift)?;
    let noise = sample_brownian(grid, 1, rng)?;
    white_noise_path(spec, n_drift, noise)
}

fn check_drift(n_drift: f64) -> Result<()> {
    if n_drift >= 0.0 && n_drift.is_finite() {
        Ok(())
    } else {
        Err(domain("n_drift", n_drift, "[0, inf)"))
    }
}

/// Regression observations `Y_t = f(t/n) + η_t` for the supplied noise.
pub fn regression_observations(spec: &SignalSpec, noise: &[f64]) -> Result<Observations> {
    let n = noise.len();
    if n == 0 {
        return Err(Error::InvalidParameter("regression needs n >= 1".into()));
    }
    let data = noise
        .iter()
        .enumerate()
        .map(|(i, eta)| spec.eval((i + 1) as f64 / n as f64) + eta)
        .collect();
    Observations::scalar(data)
}

pub fn sample_regression(
    spec: &SignalSpec,
    n: usize,
    noise: NoiseFamily,
    rng: &RngSpec,
) -> Result<Observations> {
    regression_with(spec, n, noise, &mut rng.rng())
}

pub fn regression_with<R: Rng + ?Sized>(
    spec: &SignalSpec,
    n: usize,
    noise: NoiseFamily,
    rng: &mut R,
) -> Result<Observations> {
    if n == 0 {
        return Err(Error::InvalidParameter("regression needs n >= 1".into()));
    }
    let eta: Vec<f64> = (0..n).map(|_| noise.draw(rng)).collect();
    regression_observations(spec, &eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_starts_at_zero_and_is_deterministic() {
        let spec = RngSpec::new(42, 5);
        let a = sample_brownian(128, 3, &spec).unwrap();
        let b = sample_brownian(128, 3, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.point(0), &[0.0, 0.0, 0.0]);
        assert!(sample_brownian(0, 1, &spec).is_err());
    }

    #[test]
    fn zero_signal_white_noise_is_brownian() {
        let rng = RngSpec::new(9, 1);
        let w = sample_brownian(256, 1, &rng).unwrap();
        let y = sample_white_noise_path(&SignalSpec::Zero, 100.0, 256, &rng).unwrap();
        assert_eq!(w, y);
        let bump = SignalSpec::bump(0.0, 1.0, 2.0).unwrap();
        let y = sample_white_noise_path(&bump, 0.0, 256, &rng).unwrap();
        assert_eq!(w, y);
    }

    #[test]
    fn linear_drift_with_silent_noise() {
        let bump = SignalSpec::bump(0.0, 1.0, 0.5).unwrap();
        let y = white_noise_path(&bump, 16.0, SampledPath::zeros(8, 1).unwrap()).unwrap();
        for (i, v) in y.values().iter().enumerate() {
            let u = i as f64 / 8.0;
            assert!((v - 4.0 * 0.5 * u).abs() < 1e-15);
        }
    }

    #[test]
    fn regression_hooks() {
        let rng = RngSpec::new(3, 0);
        let y = sample_regression(&SignalSpec::Zero, 50, NoiseFamily::Rademacher, &rng).unwrap();
        assert!(y.data().iter().all(|v| v.abs() == 1.0));

        let bump = SignalSpec::bump(0.0, 1.0, 0.7).unwrap();
        let y = regression_observations(&bump, &[0.0; 10]).unwrap();
        assert!(y.data().iter().all(|&v| v == 0.7));
    }
}
