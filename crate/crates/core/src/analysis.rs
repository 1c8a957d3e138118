//! Numerical checks of the analytical constants: the `√(8/3)` limit of the
//! Brownian Orlicz modulus, its deviation rate, explicit tail bounds, the
//! sub-Gaussian shrinkage integral and the Gaussian moment-generating oracle.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::orlicz::{self, YoungFunction};
use crate::processes::{
    partial_sum_polygonal, partial_sum_step, sample_brownian, Observations, RngSpec, SampledPath,
};
use crate::quadrature::integrate;
use crate::statistics::{orlicz_modulus_discrete, sup_modulus_discrete, LagGrid};

/// `‖N(0, 1)‖_{Ψ_2} = √(8/3)`, the limit of `ω_{Ψ_2}(h, W) / √h`.
pub const SQRT_8_3: f64 = 1.632_993_161_855_452;

/// Floor applied to deviations before taking logs in the rate fit.
pub const DEVIATION_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub replicate: u64,
    /// `(h, ω_{Ψ_2}(h) / √h)` in ascending `h`.
    pub rows: Vec<(f64, f64)>,
}

impl RatioTable {
    pub fn ratio_at(&self, h: f64) -> Option<f64> {
        self.rows.iter().find(|(x, _)| *x == h).map(|&(_, r)| r)
    }
}

/// `r(m/N) = ω_{Ψ_2}(m/N) / √(m/N)` for every lag in `lags`.
pub fn modulus_ratio_table(
    path: &SampledPath,
    lags: &LagGrid,
    replicate: u64,
) -> Result<RatioTable> {
    let n = path.grid();
    let rows = lags
        .resolve(n)?
        .into_iter()
        .map(|m| {
            let h = m as f64 / n as f64;
            Ok((
                h,
                orlicz_modulus_discrete(path, m, YoungFunction::PSI2)? / h.sqrt(),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(RatioTable { replicate, rows })
}

/// Ratio tables of `reps` independent Brownian paths; replicate `r` uses
/// stream `r` of `seed`.
pub fn brownian_ratio_tables(
    grid: usize,
    reps: usize,
    lags: &LagGrid,
    seed: u64,
) -> Result<Vec<RatioTable>> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let path = sample_brownian(grid, 1, &RngSpec::new(seed, r))?;
            modulus_ratio_table(&path, lags, r)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Mean over replicates of the per-replicate slope; `None` when no
    /// replicate has two usable lags.
    pub slope: Option<f64>,
    pub per_replicate: Vec<Option<f64>>,
    /// Every usable deviation sat on the floor.
    pub degenerate: bool,
    /// `(s, max_h h^{-s} (r(h) - √(8/3))_+)` averaged over replicates.
    pub scaled_sup: Vec<(f64, f64)>,
}

/// Least-squares slope of `log max(ε, r(h) - √(8/3))` against `log h`.
///
/// Lags where the ratio falls strictly below the limit are left out, so only
/// the one-sided excess enters the fit.
pub fn deviation_rate_fit(tables: &[RatioTable], s_grid: &[f64]) -> Result<RateFit> {
    let mut lags: Vec<f64> = tables
        .iter()
        .flat_map(|t| t.rows.iter().map(|r| r.0))
        .collect();
    lags.sort_by(f64::total_cmp);
    lags.dedup();
    if lags.len() < 2 {
        return Err(Error::TooFewLags(lags.len()));
    }

    let mut degenerate = true;
    let per_replicate: Vec<Option<f64>> = tables
        .iter()
        .map(|t| {
            let pts: Vec<(f64, f64)> = t
                .rows
                .iter()
                .filter(|(_, r)| *r - SQRT_8_3 >= 0.0)
                .map(|&(h, r)| {
                    let dev = (r - SQRT_8_3).max(DEVIATION_FLOOR);
                    if dev > DEVIATION_FLOOR {
                        degenerate = false;
                    }
                    (h.ln(), dev.ln())
                })
                .collect();
            least_squares_slope(&pts)
        })
        .collect();
    let fitted: Vec<f64> = per_replicate.iter().flatten().copied().collect();
    let slope = (!fitted.is_empty()).then(|| fitted.iter().sum::<f64>() / fitted.len() as f64);

    let scaled_sup = s_grid
        .iter()
        .map(|&s| {
            let total: f64 = tables
                .iter()
                .map(|t| {
                    t.rows
                        .iter()
                        .map(|&(h, r)| h.powf(-s) * (r - SQRT_8_3).max(0.0))
                        .fold(0.0, f64::max)
                })
                .sum();
            (s, total / tables.len().max(1) as f64)
        })
        .collect();

    Ok(RateFit {
        slope,
        per_replicate,
        degenerate: degenerate || slope.is_none(),
        scaled_sup,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Explicit tail bound under the sharpened sub-Gaussian increment condition:
/// `min(1, 16^p (1+κ)^p (r/(1+r))^{-p} (h ∨ h0)^{p-1} (1 - 3p/4)^{-1/2})`.
pub fn lemma36_bound(p: f64, r: f64, h: f64, h0: f64, kappa: f64) -> Result<f64> {
    if !(p > 1.0 && p < 4.0 / 3.0) {
        return Err(domain("p", p, "(1, 4/3)"));
    }
    if !(r > 0.0) {
        return Err(domain("r", r, "(0, inf)"));
    }
    if !(h > 0.0 && h < 1.0) {
        return Err(domain("h", h, "(0, 1)"));
    }
    if !(h0 >= 0.0) {
        return Err(domain("h0", h0, "[0, inf)"));
    }
    if !(kappa >= 0.0) || kappa.is_infinite() {
        return Err(domain("kappa", kappa, "[0, inf)"));
    }
    let raw = (16.0 * (1.0 + kappa) * (1.0 + r) / r).powf(p) * h.max(h0).powf(p - 1.0)
        / (1.0 - 0.75 * p).sqrt();
    Ok(raw.min(1.0))
}

/// Exponents `1.01, 1.02, ..., 1.33`.
pub fn lemma36_p_grid() -> Vec<f64> {
    (1..=33).map(|i| 1.0 + i as f64 / 100.0).collect()
}

/// Smallest [`lemma36_bound`] over `p_grid`, with the minimising exponent.
pub fn lemma36_min_bound(
    p_grid: &[f64],
    r: f64,
    h: f64,
    h0: f64,
    kappa: f64,
) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for &p in p_grid {
        let b = lemma36_bound(p, r, h, h0, kappa)?;
        if best.is_none_or(|(_, v)| b < v) {
            best = Some((p, b));
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("empty exponent grid".into()))
}

/// Tail bound under the plain sub-Gaussian condition, up to the unspecified
/// constant `c`: `min(1, c (h ∨ h0)^{p-1} (1+r)² / ((1+r)² - p))`.
pub fn condition_i_bound(c: f64, p: f64, r: f64, h: f64, h0: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(domain("p", p, "(1, 2]"));
    }
    let s = (1.0 + r) * (1.0 + r);
    if !(r >= 0.0) || !(s > p) {
        return Err(domain("r", r, "(1+r)^2 > p"));
    }
    if !(c > 0.0) {
        return Err(domain("c", c, "(0, inf)"));
    }
    Ok((c * h.max(h0).powf(p - 1.0) * s / (s - p)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub lag: usize,
    pub threshold: f64,
    pub reps: usize,
}

/// Fraction of Brownian paths on `N` points whose Orlicz modulus at lag
/// `⌊hN⌋` is at least `√(8/3) √h (1 + r)`.
pub fn tail_probability_mc(
    h: f64,
    r: f64,
    reps: usize,
    grid: usize,
    seed: u64,
) -> Result<TailEstimate> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(domain("h", h, "(0, 1]"));
    }
    let lag = (h * grid as f64).floor() as usize;
    if lag == 0 {
        return Err(domain("h*N", h * grid as f64, "[1, N]"));
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    let threshold = SQRT_8_3 * h.sqrt() * (1.0 + r);
    let hits = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let path = sample_brownian(grid, 1, &RngSpec::new(seed, i))?;
            Ok(orlicz_modulus_discrete(&path, lag, YoungFunction::PSI2)? >= threshold)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let estimate = hits as f64 / reps as f64;
    Ok(TailEstimate {
        estimate,
        std_error: (estimate * (1.0 - estimate) / reps as f64).sqrt(),
        lag,
        threshold,
        reps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShrinkCheck {
    pub integral: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `∫_0^∞ 2 / (1 + v^{1/p})^{K²} dv` against `2 + 2/(K²/p - 1)`, or against
/// the exact value `2/(K² - 1)` when `p = 1`.
pub fn shrink_bound_check(k2: f64, p: f64) -> Result<ShrinkCheck> {
    if !(1.0..=2.0).contains(&p) {
        return Err(domain("p", p, "[1, 2]"));
    }
    if !(k2 > p) || k2.is_infinite() {
        return Err(domain("K^2", k2, "(p, inf)"));
    }
    let integral = shrink_integral(k2, p);
    let bound = if p == 1.0 {
        2.0 / (k2 - 1.0)
    } else {
        2.0 + 2.0 / (k2 / p - 1.0)
    };
    Ok(ShrinkCheck {
        integral,
        bound,
        ok: integral <= bound * (1.0 + 1e-6),
    })
}

/// After `v = e^x` the integrand `2 e^x (1 + e^{x/p})^{-K²}` decays
/// exponentially in both directions and is log-concave, so the range is cut
/// where it drops below `1e-14`.
fn shrink_integral(k2: f64, p: f64) -> f64 {
    const CUTOFF: f64 = 1e-14;
    let log_g = |x: f64| std::f64::consts::LN_2 + x - k2 * softplus(x / p);
    let g = |x: f64| log_g(x).exp();
    let log_cut = CUTOFF.ln();
    // the mode solves e^{x/p} = p/(K² - p)
    let mode = p * (p / (k2 - p)).ln();
    let mut lo = mode - 1.0;
    while log_g(lo) > log_cut {
        lo = mode - 2.0 * (mode - lo);
    }
    let mut hi = mode + 1.0;
    while log_g(hi) > log_cut {
        hi = mode + 2.0 * (hi - mode);
    }
    integrate(g, lo, mode, 0.0, 1e-12).value + integrate(g, mode, hi, 0.0, 1e-12).value
}

fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

/// `E exp(|Z|²/K²) = (1 - 2/K²)^{-d/2}` for standard `d`-dimensional `Z`.
pub fn gaussian_mgf_oracle(k2: f64, d: usize) -> Result<f64> {
    if !(k2 > 2.0) {
        return Err(domain("K^2", k2, "(2, inf]"));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok((1.0 - 2.0 / k2).powf(-(d as f64) / 2.0))
}

/// `‖ |Z| ‖_{Ψ_2}` for standard `d`-dimensional `Z`: the root of
/// `E exp(|Z|²/K²) = 2`.
pub fn gaussian_orlicz_constant(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok((2.0 / (1.0 - 2f64.powf(-2.0 / d as f64))).sqrt())
}

/// Empirical `Ψ_2` norm of `count` Euclidean norms of standard `d`-dimensional
/// Gaussians drawn from stream 0 of `seed`.
pub fn gaussian_norm_mc(count: usize, d: usize, seed: u64) -> Result<f64> {
    if count == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "count and dimension must be >= 1".into(),
        ));
    }
    let mut rng = RngSpec::new(seed, 0).rng();
    let norms: Vec<f64> = (0..count)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * z
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let data = orlicz::WeightedMagnitudes::uniform(&norms)?;
    orlicz::empirical_orlicz_norm(&data, YoungFunction::PSI2, 1.0)
}

/// Gap between the polygonal and step partial-sum processes on the grid
/// refined `refine` times: returns the empirical `Ψ_2` norm of
/// `|S_n(u) - S̃_n(u)|` (weight `1/(Rn)`) and its ceiling
/// `n^{-1/2} ‖ |X_t| ‖` (weight `1/n`).
pub fn interpolation_gap(x: &Observations, refine: usize) -> Result<(f64, f64)> {
    let poly = partial_sum_polygonal(x, refine)?;
    let step = partial_sum_step(x);
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    let gaps: Vec<f64> = (0..=n * refine)
        .map(|i| {
            let s = step.sum(i / refine);
            poly.point(i)
                .iter()
                .zip(s)
                .map(|(a, b)| (a - b * scale).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let lhs = orlicz::solve(&gaps, 1.0 / (n * refine) as f64, YoungFunction::PSI2, 1.0);
    let rhs = scale * orlicz::solve(&x.norms(), 1.0 / n as f64, YoungFunction::PSI2, 1.0);
    Ok((lhs, rhs))
}

/// `max_m sup-modulus(m) / (ω_{Ψ_2}(m/N) √(log(e N / m)))` over `lags`;
/// zero-modulus lags are skipped.
pub fn sup_orlicz_ratio(path: &SampledPath, lags: &LagGrid) -> Result<f64> {
    let n = path.grid();
    let mut best: f64 = 0.0;
    for m in lags.resolve(n)? {
        let omega = orlicz_modulus_discrete(path, m, YoungFunction::PSI2)?;
        if omega > 0.0 {
            let sup = sup_modulus_discrete(path, m)?;
            best = best.max(sup / (omega * (1.0 + (n as f64 / m as f64).ln()).sqrt()));
        }
    }
    Ok(best)
}
