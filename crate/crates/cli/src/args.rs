use std::collections::BTreeMap;
use std::path::PathBuf;

use besov_orlicz::montecarlo::{auto_delta, SignalFamily, StatKind};
use besov_orlicz::processes::{NoiseFamily, SignalSpec};
use besov_orlicz::statistics::LagGrid;
use besov_orlicz::Modulus;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "besov-orlicz",
    version,
    about = "Besov-Orlicz multiscale statistics: limits, bounds and Monte-Carlo power"
)]
pub struct Cli {
    /// Base seed; replicate r draws from stream r.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical Ψ₂ norm of simulated magnitudes against the closed form.
    Norm(NormArgs),
    /// Ratio table ω(h)/√h of Brownian paths.
    Limit(LimitArgs),
    /// Deviation rate of the ratio table towards √(8/3).
    Ratefit(RatefitArgs),
    /// Tail frequency of the Orlicz modulus against the explicit bound.
    Tailbound(TailArgs),
    /// Sub-Gaussian shrinkage integral against its closed bound.
    Shrinkcheck(ShrinkArgs),
    /// Lower bound on the seminorm of a sign-flip antiderivative.
    Lowerbound(LowerBoundArgs),
    /// Simulated distribution of the statistics (null unless --signal is set).
    Simulate(McArgs),
    /// Power at fixed levels against a signal.
    Power(PowerArgs),
    /// ROC table against a signal.
    Roc(RocArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Gaussian,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    pub dist: Dist,
    #[arg(long, default_value_t = 1_000_000)]
    pub count: usize,
    /// Dimension; magnitudes are Euclidean norms.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 1 << 18)]
    pub grid: usize,
    #[arg(short = 'B', long = "reps", visible_alias = "B", default_value_t = 20)]
    pub reps: usize,
    #[arg(long, value_parser = parse_lags, default_value = "dyadic")]
    pub lags: LagGrid,
}

#[derive(Debug, Args)]
pub struct RatefitArgs {
    #[command(flatten)]
    pub limit: LimitArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.25")]
    pub s_grid: Vec<f64>,
    #[arg(long, default_value_t = 2f64.powi(-12))]
    pub h_min: f64,
    #[arg(long, default_value_t = 2f64.powi(-4))]
    pub h_max: f64,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.0009765625")]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub r: Vec<f64>,
    #[arg(short = 'B', long = "reps", visible_alias = "B", default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value_t = 1 << 16)]
    pub grid: usize,
    #[arg(long, default_value_t = 2.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    pub h0: f64,
}

#[derive(Debug, Args)]
pub struct ShrinkArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2")]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "3,5,8,16")]
    pub k2: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct LowerBoundArgs {
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long)]
    pub h: f64,
    /// Number of disjoint constant-sign intervals.
    #[arg(long)]
    pub m: f64,
    /// Exponent p of Ψ_p(x) = exp(x^p) - 1.
    #[arg(long, default_value_t = 2.0)]
    pub psi_p: f64,
    #[arg(long, value_parser = parse_rho, default_value = "0.5,0")]
    pub rho: Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    WhiteNoise,
    Regression,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(
        short = 'B',
        long = "reps",
        visible_alias = "B",
        default_value_t = 1000
    )]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = ModelKind::WhiteNoise)]
    pub model: ModelKind,
    /// White-noise grid size N (mesh 1/N).
    #[arg(long, default_value_t = 4096)]
    pub mesh: usize,
    /// Sample size n of the white-noise drift; defaults to the grid size.
    #[arg(long)]
    pub n_drift: Option<f64>,
    /// Regression sample size n.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, value_parser = parse_noise, default_value = "gaussian")]
    pub noise: NoiseFamily,
    #[arg(long, value_parser = parse_stat, value_delimiter = ',', default_value = "bo,holder")]
    pub stat: Vec<StatKind>,
    /// Overrides the modulus of every statistic that uses one.
    #[arg(long, value_parser = parse_rho)]
    pub rho: Option<Modulus>,
    /// Overrides the lag grid (default dyadic).
    #[arg(long, value_parser = parse_lags)]
    pub lags: Option<LagGrid>,
    /// Multiplies the bo statistic.
    #[arg(long, default_value_t = 1.0)]
    pub bo_scale: f64,
    /// kind:key=val,... with kind in {zero, flip, doppler, sine, bump}.
    #[arg(long, value_parser = parse_signal)]
    pub signal: Option<SignalArg>,
    /// Choose δ from n δ² l = |log₂ l|^{1/4}.
    #[arg(long)]
    pub auto_delta: bool,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1")]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub mc: McArgs,
    /// Levels i/L for i = 1..=L.
    #[arg(long, default_value_t = 200)]
    pub levels: usize,
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        })
        .collect()
}

fn parse_lags(s: &str) -> Result<LagGrid, String> {
    s.parse::<LagGrid>()
        .map_err(|tok| format!("`{tok}` is not a lag (expected all, dyadic or m1,m2,...)"))
}

fn parse_rho(s: &str) -> Result<Modulus, String> {
    let parts = parse_f64_list(s)?;
    match parts[..] {
        [mu, nu] => Modulus::new(mu, nu).map_err(|e| e.to_string()),
        _ => Err(format!("`{s}` must be mu,nu")),
    }
}

fn parse_noise(s: &str) -> Result<NoiseFamily, String> {
    s.parse::<NoiseFamily>()
        .map_err(|_| format!("unknown noise `{s}`"))
}

fn parse_stat(s: &str) -> Result<StatKind, String> {
    s.trim().parse::<StatKind>().map_err(|e| e.to_string())
}

/// Signal as written on the command line; δ is resolved once the sample
/// size is known.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalArg {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

const SIGNAL_KEYS: &[(&str, &[&str])] = &[
    ("zero", &[]),
    ("flip", &["l", "delta", "strength", "signs"]),
    ("doppler", &["delta", "strength"]),
    ("sine", &["l", "delta", "strength"]),
    ("bump", &["a", "b", "delta", "strength"]),
];

fn parse_signal(s: &str) -> Result<SignalArg, String> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let allowed = SIGNAL_KEYS
        .iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, keys)| *keys)
        .ok_or_else(|| format!("unknown signal `{kind}`"))?;
    let mut params = BTreeMap::new();
    for pair in rest.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("`{pair}` is not key=value"))?;
        if !allowed.contains(&key) {
            return Err(format!("unknown key `{key}` for signal `{kind}`"));
        }
        params.insert(key.to_string(), value.to_string());
    }
    Ok(SignalArg {
        kind: kind.to_string(),
        params,
    })
}

impl SignalArg {
    fn num(&self, key: &str) -> Result<Option<f64>, String> {
        self.params
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| format!("`{v}` is not a number (signal key `{key}`)"))
            })
            .transpose()
    }

    fn need(&self, key: &str) -> Result<f64, String> {
        self.num(key)?
            .ok_or_else(|| format!("signal `{}` needs `{key}=`", self.kind))
    }

    /// δ from `delta=`, `strength=` (= √n δ) or the auto-delta coupling.
    fn delta(&self, n: f64, auto: bool) -> Result<f64, String> {
        let given = [
            self.num("delta")?,
            self.num("strength")?.map(|s| s / n.sqrt()),
        ];
        match (given, auto) {
            ([Some(d), None], false) | ([None, Some(d)], false) => Ok(d),
            ([None, None], true) => {
                let l = self.need("l")?;
                auto_delta(l, n).map_err(|e| e.to_string())
            }
            ([None, None], false) => Err(format!(
                "signal `{}` needs delta=, strength= or --auto-delta",
                self.kind
            )),
            _ => Err("give only one of delta=, strength= and --auto-delta".into()),
        }
    }

    pub fn resolve(&self, n: f64, auto: bool) -> Result<SignalFamily, String> {
        let lib = |r: besov_orlicz::Result<SignalSpec>| r.map_err(|e| e.to_string());
        Ok(match self.kind.as_str() {
            "zero" => SignalFamily::zero(),
            "flip" => {
                let (l, delta) = (self.need("l")?, self.delta(n, auto)?);
                match self.params.get("signs").map(String::as_str) {
                    None | Some("random") => {
                        besov_orlicz::processes::flip_blocks(l).map_err(|e| e.to_string())?;
                        SignalFamily::RandomFlip { l, delta }
                    }
                    Some("alternating") => lib(SignalSpec::flip_alternating(l, delta))?.into(),
                    Some(other) => {
                        return Err(format!("unknown signs `{other}` (random or alternating)"))
                    }
                }
            }
            "doppler" => lib(SignalSpec::doppler(self.delta(n, auto)?))?.into(),
            "sine" => lib(SignalSpec::sine(self.delta(n, auto)?, self.need("l")?))?.into(),
            "bump" => lib(SignalSpec::bump(
                self.need("a")?,
                self.need("b")?,
                self.delta(n, auto)?,
            ))?
            .into(),
            other => return Err(format!("unknown signal `{other}`")),
        })
    }
}
