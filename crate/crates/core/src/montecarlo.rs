//! Replicated simulation of test statistics: null distributions, Monte-Carlo
//! p-values, power and ROC curves.
//!
//! Replicate `r` of a batch draws everything (signal signs, noise) from the
//! stream `stream_offset + r` of the batch seed, so results do not depend on
//! how replicates are scheduled over threads. Null, alternative and
//! calibration batches use disjoint stream ranges via [`StreamDomain`].

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::orlicz::{Modulus, YoungFunction};
use crate::processes::{
    brownian_with, partial_sum_step, regression_with, NoiseFamily, Observations, RngSpec,
    SampledPath, SignalSpec,
};
use crate::statistics::{
    besov_orlicz_stat, changepoint_stat_holder, changepoint_stat_orlicz, holder_stat, t_ds, t_km,
    LagGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamDomain {
    Null,
    Alternative,
    Calibration,
}

impl StreamDomain {
    pub fn offset(self) -> u64 {
        match self {
            StreamDomain::Null => 0,
            StreamDomain::Alternative => 1 << 40,
            StreamDomain::Calibration => 2 << 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    /// `Y(u) = √n_drift F(u) + W(u)` on the grid `i / mesh`.
    WhiteNoise { mesh: usize, n_drift: f64 },
    /// `Y_t = f(t/n) + η_t`.
    Regression { n: usize, noise: NoiseFamily },
}

/// Signal drawn afresh for every replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SignalFamily {
    Fixed {
        signal: SignalSpec,
    },
    /// Flip signal whose Rademacher signs come from the replicate's stream.
    RandomFlip {
        l: f64,
        delta: f64,
    },
}

impl SignalFamily {
    pub fn zero() -> Self {
        SignalFamily::Fixed {
            signal: SignalSpec::Zero,
        }
    }

    fn instantiate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SignalSpec> {
        match self {
            SignalFamily::Fixed { signal } => Ok(signal.clone()),
            SignalFamily::RandomFlip { l, delta } => SignalSpec::flip_random(*l, *delta, rng),
        }
    }
}

impl From<SignalSpec> for SignalFamily {
    fn from(signal: SignalSpec) -> Self {
        SignalFamily::Fixed { signal }
    }
}

/// Magnitude `δ` with `n δ² l = |log₂ l|^{1/4}`.
pub fn auto_delta(l: f64, n_drift: f64) -> Result<f64> {
    if !(l > 0.0 && l < 1.0) {
        return Err(domain("l", l, "(0, 1)"));
    }
    if !(n_drift > 0.0) || n_drift.is_infinite() {
        return Err(domain("n_drift", n_drift, "(0, inf)"));
    }
    Ok((l.log2().abs().powf(0.25) / (n_drift * l)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    /// Besov-Orlicz seminorm of the observed path.
    Bo,
    /// Multiplicatively penalised scan over all intervals.
    Km,
    /// Additively penalised scan over all intervals.
    Ds,
    /// Hölder seminorm of the observed path.
    Holder,
    CpHolder,
    CpOrlicz,
}

impl StatKind {
    pub const ALL: [StatKind; 6] = [
        StatKind::Bo,
        StatKind::Km,
        StatKind::Ds,
        StatKind::Holder,
        StatKind::CpHolder,
        StatKind::CpOrlicz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::Bo => "bo",
            StatKind::Km => "km",
            StatKind::Ds => "ds",
            StatKind::Holder => "holder",
            StatKind::CpHolder => "cp-holder",
            StatKind::CpOrlicz => "cp-orlicz",
        }
    }

    pub fn default_modulus(self) -> Modulus {
        match self {
            StatKind::Bo | StatKind::CpOrlicz => Modulus::SQRT,
            _ => Modulus::SQRT_LOG,
        }
    }
}

impl std::str::FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticSpec {
    pub kind: StatKind,
    pub rho: Modulus,
    pub lags: LagGrid,
    /// Multiplies the reported value.
    pub scale: f64,
}

impl StatisticSpec {
    /// Default modulus, dyadic lags, unit scale.
    pub fn new(kind: StatKind) -> Self {
        StatisticSpec {
            kind,
            rho: kind.default_modulus(),
            lags: LagGrid::Dyadic,
            scale: 1.0,
        }
    }

    pub fn with_rho(mut self, rho: Modulus) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_lags(mut self, lags: LagGrid) -> Self {
        self.lags = lags;
        self
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    /// Evaluate on one observation.
    pub fn evaluate(&self, obs: &Observation) -> Result<f64> {
        let value = match self.kind {
            StatKind::Bo => {
                besov_orlicz_stat(&obs.path, self.rho, YoungFunction::PSI2, &self.lags)?.value
            }
            StatKind::Holder => holder_stat(&obs.path, self.rho, &self.lags)?.value,
            StatKind::Km => t_km(&obs.increments()?)?.value,
            StatKind::Ds => t_ds(&obs.increments()?)?.value,
            StatKind::CpHolder => changepoint_stat_holder(&obs.path, self.rho, &self.lags)?.value,
            StatKind::CpOrlicz => {
                changepoint_stat_orlicz(&obs.path, self.rho, YoungFunction::PSI2, &self.lags)?.value
            }
        };
        Ok(self.scale * value)
    }
}

/// One simulated data set, viewed both as a path on `[0, 1]` and as the
/// `n` unit-scale observations whose normalised partial sums form the path.
#[derive(Debug, Clone)]
pub struct Observation {
    pub path: SampledPath,
    observations: Option<Observations>,
}

impl Observation {
    pub fn from_path(path: SampledPath) -> Self {
        Observation {
            path,
            observations: None,
        }
    }

    pub fn from_observations(x: Observations) -> Self {
        Observation {
            path: partial_sum_step(&x).to_path(),
            observations: Some(x),
        }
    }

    /// `X_i = √N (path(i/N) - path((i-1)/N))` for path-only observations.
    pub fn increments(&self) -> Result<Observations> {
        if let Some(x) = &self.observations {
            return Ok(x.clone());
        }
        let (n, d) = (self.path.grid(), self.path.dim());
        let scale = (n as f64).sqrt();
        let v = self.path.values();
        let data = (d..v.len()).map(|i| scale * (v[i] - v[i - d])).collect();
        Observations::new(n, d, data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub replicates: usize,
    pub model: Model,
    pub signal: SignalFamily,
    pub statistics: Vec<StatisticSpec>,
    pub seed: u64,
    pub stream_offset: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(replicates: usize, model: Model, statistics: Vec<StatisticSpec>, seed: u64) -> Self {
        McConfig {
            replicates,
            model,
            signal: SignalFamily::zero(),
            statistics,
            seed,
            stream_offset: StreamDomain::Null.offset(),
            threads: None,
        }
    }

    pub fn with_signal(mut self, signal: impl Into<SignalFamily>) -> Self {
        self.signal = signal.into();
        self
    }

    pub fn in_domain(mut self, domain: StreamDomain) -> Self {
        self.stream_offset = domain.offset();
        self
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be >= 1".into()));
        }
        if self.statistics.is_empty() {
            return Err(Error::InvalidParameter("statistic list is empty".into()));
        }
        for (i, s) in self.statistics.iter().enumerate() {
            if self.statistics[..i].iter().any(|t| t.name() == s.name()) {
                return Err(Error::InvalidParameter(format!(
                    "statistic `{}` listed twice",
                    s.name()
                )));
            }
        }
        match self.model {
            Model::WhiteNoise { mesh, n_drift } => {
                if mesh == 0 {
                    return Err(Error::InvalidParameter("mesh must be >= 1".into()));
                }
                if !(n_drift >= 0.0) || n_drift.is_infinite() {
                    return Err(domain("n_drift", n_drift, "[0, inf)"));
                }
            }
            Model::Regression { n, .. } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("n must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Simulate one replicate's observation.
pub fn simulate_replicate(config: &McConfig, replicate: u64) -> Result<Observation> {
    let drift = fixed_drift(config);
    replicate_observation(config, drift.as_deref(), replicate)
}

fn fixed_drift(config: &McConfig) -> Option<Vec<f64>> {
    match (&config.model, &config.signal) {
        (Model::WhiteNoise { mesh, n_drift }, SignalFamily::Fixed { signal })
            if *n_drift > 0.0 && !signal.is_zero() =>
        {
            Some(signal.antiderivative_on_grid(*mesh))
        }
        _ => None,
    }
}

fn replicate_observation(
    config: &McConfig,
    drift: Option<&[f64]>,
    replicate: u64,
) -> Result<Observation> {
    let mut rng = RngSpec::new(config.seed, config.stream_offset + replicate).rng();
    let signal = config.signal.instantiate(&mut rng)?;
    match config.model {
        Model::WhiteNoise { mesh, n_drift } => {
            let mut path = brownian_with(mesh, 1, &mut rng)?;
            if n_drift > 0.0 && !signal.is_zero() {
                let scale = n_drift.sqrt();
                match drift {
                    Some(f) => path.add_drift(f, scale)?,
                    None => path.add_drift(&signal.antiderivative_on_grid(mesh), scale)?,
                }
            }
            Ok(Observation::from_path(path))
        }
        Model::Regression { n, noise } => Ok(Observation::from_observations(regression_with(
            &signal, n, noise, &mut rng,
        )?)),
    }
}

/// Sorted Monte-Carlo sample of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub name: String,
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(name: impl Into<String>, mut samples: Vec<f64>) -> Result<Self> {
        if let Some(index) = samples.iter().position(|v| v.is_nan()) {
            return Err(Error::NonFinite { index });
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalDistribution {
            name: name.into(),
            sorted: samples,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Number of samples `>= value`.
    pub fn count_at_least(&self, value: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&x| x < value)
    }

    /// Lower median.
    pub fn median(&self) -> Option<f64> {
        self.quantile(0.5)
    }

    /// Order statistic `⌈q·B⌉` (1-based), clamped to the sample.
    pub fn quantile(&self, q: f64) -> Option<f64> {
        if self.sorted.is_empty() || !(0.0..=1.0).contains(&q) {
            return None;
        }
        let k = ((q * self.sorted.len() as f64).ceil() as usize).clamp(1, self.sorted.len());
        Some(self.sorted[k - 1])
    }
}

fn p_of(value: f64, null: &EmpiricalDistribution) -> f64 {
    (1 + null.count_at_least(value)) as f64 / (null.len() + 1) as f64
}

/// Monte-Carlo p-value `(1 + #{null >= value}) / (B + 1)`.
pub fn p_value(value: f64, null: &EmpiricalDistribution) -> Result<f64> {
    if null.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(p_of(value, null))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// `(level, power)` pairs with ascending level.
    pub points: Vec<(f64, f64)>,
}

impl RocCurve {
    /// Power at the largest tabulated level not exceeding `alpha`.
    pub fn power_at(&self, alpha: f64) -> Option<f64> {
        self.points
            .iter()
            .take_while(|(a, _)| *a <= alpha)
            .last()
            .map(|&(_, p)| p)
    }
}

/// Levels `i / count` for `i = 1..=count`.
pub fn level_grid(count: usize) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / count as f64).collect()
}

/// Fraction of alternative samples whose p-value is at most each level.
pub fn roc_curve(
    null: &EmpiricalDistribution,
    alt: &EmpiricalDistribution,
    levels: &[f64],
) -> Result<RocCurve> {
    if null.is_empty() || alt.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if let Some(&bad) = levels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(domain("level", bad, "[0, 1]"));
    }
    let mut pvals: Vec<f64> = alt.samples().iter().map(|&v| p_of(v, null)).collect();
    pvals.sort_by(f64::total_cmp);
    let mut levels = levels.to_vec();
    levels.sort_by(f64::total_cmp);
    let b = pvals.len() as f64;
    let points = levels
        .into_iter()
        .map(|alpha| {
            let rejected = pvals.partition_point(|&p| p <= alpha);
            (alpha, rejected as f64 / b)
        })
        .collect();
    Ok(RocCurve { points })
}

/// Fraction of `alt` samples rejected at level `alpha`.
pub fn power(null: &EmpiricalDistribution, alt: &EmpiricalDistribution, alpha: f64) -> Result<f64> {
    Ok(roc_curve(null, alt, &[alpha])?.points[0].1)
}

/// Simulate `B` replicates and evaluate every configured statistic.
pub fn run_batch(config: &McConfig) -> Result<BTreeMap<String, EmpiricalDistribution>> {
    config.validate()?;
    let drift = fixed_drift(config);
    let work = || -> Result<Vec<Vec<f64>>> {
        (0..config.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let obs = replicate_observation(config, drift.as_deref(), r)?;
                config
                    .statistics
                    .iter()
                    .map(|s| s.evaluate(&obs))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect()
    };
    let rows = match config.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    config
        .statistics
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let samples = rows.iter().map(|row| row[j]).collect();
            Ok((
                s.name().to_string(),
                EmpiricalDistribution::new(s.name(), samples)?,
            ))
        })
        .collect()
}
