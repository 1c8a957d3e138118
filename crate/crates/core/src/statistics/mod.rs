//! Discrete moduli, Besov-Orlicz and Hölder seminorms, scan statistics and
//! changepoint statistics of sampled paths.
//!
//! All statistics work on the uniform grid `u = a/N`. The Orlicz modulus at
//! lag `m` is the left-endpoint Riemann analogue
//!
//! ```text
//! ω(m/N) = inf { K : (1/N) Σ_{a=0}^{N-m} Ψ(|path((a+m)/N) - path(a/N)| / K) <= 1 },
//! ```
//!
//! which for the step partial-sum process is exactly the sum used by the
//! discretised statistic `D_{ρ,n}`.

mod bounds;
mod changepoint;
mod scan;

use serde::{Deserialize, Serialize};

pub use bounds::{prop52_display, prop52_lower_bound, LowerBoundDisplay};
pub use changepoint::{changepoint_stat_holder, changepoint_stat_orlicz};
pub use scan::{t_ds, t_km};

use crate::error::{Error, Result};
use crate::orlicz::{self, Modulus, YoungFunction};
use crate::processes::{partial_sum_step, Observations, SampledPath};

/// Set of lags `m` at which a multiscale statistic is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LagGrid {
    /// `m = 1..=N`.
    All,
    /// `m = ⌈2^{-j} N⌉`, `j >= 0`.
    Dyadic,
    Explicit(Vec<usize>),
}

impl LagGrid {
    /// Distinct lags in ascending order, all within `[1, grid]`.
    pub fn resolve(&self, grid: usize) -> Result<Vec<usize>> {
        if grid == 0 {
            return Err(Error::InvalidParameter("grid size must be >= 1".into()));
        }
        let mut lags = match self {
            LagGrid::All => (1..=grid).collect(),
            LagGrid::Dyadic => {
                let mut v = Vec::new();
                for j in 0..usize::BITS {
                    let m = grid.div_ceil(1usize << j);
                    v.push(m);
                    if m == 1 {
                        break;
                    }
                }
                v
            }
            LagGrid::Explicit(list) => {
                if let Some(&bad) = list.iter().find(|&&m| m == 0 || m > grid) {
                    return Err(Error::LagOutOfRange {
                        lag: bad,
                        max: grid,
                    });
                }
                list.clone()
            }
        };
        lags.sort_unstable();
        lags.dedup();
        if lags.is_empty() {
            return Err(Error::InvalidParameter("lag grid is empty".into()));
        }
        Ok(lags)
    }
}

impl std::str::FromStr for LagGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(LagGrid::All),
            "dyadic" => Ok(LagGrid::Dyadic),
            list => list
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| t.to_string()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(LagGrid::Explicit),
        }
    }
}

/// Location of the maximising term: lag (or interval length) and, where the
/// statistic is a pointwise supremum, the offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub lag: usize,
    pub offset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatValue {
    pub name: String,
    pub value: f64,
    pub argmax: Option<Witness>,
}

impl StatValue {
    fn new(name: &str, value: f64, argmax: Option<Witness>) -> Self {
        StatValue {
            name: name.to_string(),
            value,
            argmax,
        }
    }
}

/// Running maximum where ties keep the first candidate.
#[derive(Debug)]
pub(crate) struct ArgMax {
    value: f64,
    witness: Option<Witness>,
}

impl ArgMax {
    pub(crate) fn new() -> Self {
        ArgMax {
            value: f64::NEG_INFINITY,
            witness: None,
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, value: f64, lag: usize, offset: Option<usize>) {
        if value > self.value {
            self.value = value;
            self.witness = Some(Witness { lag, offset });
        }
    }

    pub(crate) fn finish(self, name: &str) -> StatValue {
        StatValue::new(name, self.value, self.witness)
    }
}

/// Orlicz modulus `ω_Ψ(m/N)` of a sampled path.
pub fn orlicz_modulus_discrete(path: &SampledPath, m: usize, psi: YoungFunction) -> Result<f64> {
    path.check_lag(m)?;
    let mut buf = Vec::new();
    Ok(modulus_into(path, m, psi, &mut buf))
}

fn modulus_into(path: &SampledPath, m: usize, psi: YoungFunction, buf: &mut Vec<f64>) -> f64 {
    let n = path.grid();
    buf.clear();
    buf.extend((0..=n - m).map(|a| path.increment_norm(a, m)));
    orlicz::solve(buf, 1.0 / n as f64, psi, 1.0)
}

/// `max_a |path((a+m)/N) - path(a/N)|`.
pub fn sup_modulus_discrete(path: &SampledPath, m: usize) -> Result<f64> {
    path.check_lag(m)?;
    Ok((0..=path.grid() - m)
        .map(|a| path.increment_norm(a, m))
        .fold(0.0, f64::max))
}

/// Discrete Besov-Orlicz seminorm `max_m ω_Ψ(m/N) / ρ(m/N)` over `lags`.
pub fn besov_orlicz_stat(
    path: &SampledPath,
    rho: Modulus,
    psi: YoungFunction,
    lags: &LagGrid,
) -> Result<StatValue> {
    let n = path.grid();
    let mut best = ArgMax::new();
    let mut buf = Vec::with_capacity(n + 1);
    for m in lags.resolve(n)? {
        let k = modulus_into(path, m, psi, &mut buf);
        best.offer(k / rho.eval_unchecked(m as f64 / n as f64), m, None);
    }
    Ok(best.finish("bo"))
}

/// Discrete Hölder seminorm `max_{m, a} |Δ_m path(a/N)| / ρ(m/N)` over `lags`.
pub fn holder_stat(path: &SampledPath, rho: Modulus, lags: &LagGrid) -> Result<StatValue> {
    let n = path.grid();
    let mut best = ArgMax::new();
    for m in lags.resolve(n)? {
        let weight = 1.0 / rho.eval_unchecked(m as f64 / n as f64);
        let (mut top, mut at) = (f64::NEG_INFINITY, 0);
        for a in 0..=n - m {
            let v = path.increment_norm(a, m);
            if v > top {
                top = v;
                at = a;
            }
        }
        best.offer(top * weight, m, Some(at));
    }
    Ok(best.finish("holder"))
}

/// Besov-Orlicz test statistic: `besov_orlicz_stat` with `Ψ_2` applied to the
/// step partial-sum process `P_{⌊un⌋}/√n` of the observations.
pub fn t_bo(x: &Observations, rho: Modulus, lags: &LagGrid) -> Result<StatValue> {
    let path = partial_sum_step(x).to_path();
    besov_orlicz_stat(&path, rho, YoungFunction::PSI2, lags)
}
