//! Multiscale changepoint statistics built on the triangular contrast
//! `|[S(u) - S(u-h)] - [S(u+h) - S(u)]|` at `h = m/N`, `u = a/N`,
//! `m <= a <= N - m`.

use super::{ArgMax, LagGrid, StatValue};
use crate::error::{Error, Result};
use crate::orlicz::{self, Modulus, YoungFunction};
use crate::processes::SampledPath;

#[inline]
fn contrast(path: &SampledPath, a: usize, m: usize) -> f64 {
    if path.dim() == 1 {
        let v = path.values();
        (2.0 * v[a] - v[a - m] - v[a + m]).abs()
    } else {
        let (left, mid, right) = (path.point(a - m), path.point(a), path.point(a + m));
        left.iter()
            .zip(mid)
            .zip(right)
            .map(|((l, c), r)| {
                let d = 2.0 * c - l - r;
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Lags with `2m <= N`.
fn changepoint_lags(path: &SampledPath, lags: &LagGrid) -> Result<Vec<usize>> {
    let n = path.grid();
    let lags: Vec<usize> = lags
        .resolve(n)?
        .into_iter()
        .filter(|&m| 2 * m <= n)
        .collect();
    if lags.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no changepoint lag m with 2m <= {n}"
        )));
    }
    Ok(lags)
}

/// `max_{m, a} contrast(a, m) / ρ(m/N)`.
pub fn changepoint_stat_holder(
    path: &SampledPath,
    rho: Modulus,
    lags: &LagGrid,
) -> Result<StatValue> {
    let n = path.grid();
    let mut best = ArgMax::new();
    for m in changepoint_lags(path, lags)? {
        let weight = 1.0 / rho.eval_unchecked(m as f64 / n as f64);
        let (mut top, mut at) = (f64::NEG_INFINITY, m);
        for a in m..=n - m {
            let v = contrast(path, a, m);
            if v > top {
                top = v;
                at = a;
            }
        }
        best.offer(top * weight, m, Some(at));
    }
    Ok(best.finish("cp-holder"))
}

/// For each lag, the smallest `K_m` with
/// `(1/N) Σ_{a=m}^{N-m} Ψ(contrast(a, m) / (ρ(m/N) K_m)) <= 1`;
/// the statistic is `max_m K_m`, the smallest `K` meeting the constraint
/// for every lag simultaneously.
pub fn changepoint_stat_orlicz(
    path: &SampledPath,
    rho: Modulus,
    psi: YoungFunction,
    lags: &LagGrid,
) -> Result<StatValue> {
    let n = path.grid();
    let mut best = ArgMax::new();
    let mut buf = Vec::with_capacity(n);
    for m in changepoint_lags(path, lags)? {
        let weight = 1.0 / rho.eval_unchecked(m as f64 / n as f64);
        buf.clear();
        buf.extend((m..=n - m).map(|a| contrast(path, a, m) * weight));
        let k = orlicz::solve(&buf, 1.0 / n as f64, psi, 1.0);
        best.offer(k, m, None);
    }
    Ok(best.finish("cp-orlicz"))
}
