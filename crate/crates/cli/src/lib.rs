//! Command-line front end: parses flags, runs one experiment and writes its
//! table with a reproducibility manifest.

mod args;
pub mod output;

use std::ffi::OsString;
use std::time::Instant;

use besov_orlicz::analysis::{
    brownian_ratio_tables, deviation_rate_fit, gaussian_norm_mc, gaussian_orlicz_constant,
    lemma36_min_bound, lemma36_p_grid, shrink_bound_check, tail_probability_mc, RatioTable,
};
use besov_orlicz::montecarlo::{
    level_grid, power, roc_curve, run_batch, EmpiricalDistribution, McConfig, Model, StatKind,
    StatisticSpec, StreamDomain,
};
use besov_orlicz::statistics::prop52_lower_bound;
use besov_orlicz::YoungFunction;
use clap::Parser;
use serde_json::{json, Value};
use std::collections::BTreeMap;

use args::{Cli, Command, McArgs, ModelKind};
use output::{RunManifest, Table};

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<besov_orlicz::Error> for Failure {
    fn from(e: besov_orlicz::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// Run the command line `argv` (program name first). Returns the process
/// exit code: 0 on success, 2 on a usage error, 1 on a runtime failure.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be >= 1".into())),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Failure::Runtime(e.to_string())),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let start = Instant::now();
    let (name, params, table) = match &cli.command {
        Command::Norm(a) => (
            "norm",
            json!({"dist": "gaussian", "count": a.count, "dim": a.dim}),
            norm(a, cli.seed)?,
        ),
        Command::Limit(a) => ("limit", limit_params(a), limit(a, cli.seed)?),
        Command::Ratefit(a) => {
            let mut p = limit_params(&a.limit);
            p["s_grid"] = json!(a.s_grid);
            p["h_min"] = json!(a.h_min);
            p["h_max"] = json!(a.h_max);
            ("ratefit", p, ratefit(a, cli.seed)?)
        }
        Command::Tailbound(a) => (
            "tailbound",
            json!({"h": a.h, "r": a.r, "reps": a.reps, "grid": a.grid, "kappa": a.kappa, "h0": a.h0,
                   "p_grid": lemma36_p_grid()}),
            tailbound(a, cli.seed)?,
        ),
        Command::Shrinkcheck(a) => (
            "shrinkcheck",
            json!({"p": a.p, "k2": a.k2}),
            shrinkcheck(a)?,
        ),
        Command::Lowerbound(a) => (
            "lowerbound",
            json!({"delta": a.delta, "h": a.h, "m": a.m, "psi_p": a.psi_p, "rho": a.rho}),
            lowerbound(a)?,
        ),
        Command::Simulate(a) => {
            let cfg = mc_config(a, cli.seed, a.signal.is_some())?;
            ("simulate", json!({ "config": cfg }), simulate(&cfg)?)
        }
        Command::Power(a) => {
            let (null_cfg, alt_cfg) = null_and_alt(&a.mc, cli.seed)?;
            let params = json!({"null": null_cfg, "alternative": alt_cfg, "alpha": a.alpha});
            let (null, alt) = (run_batch(&null_cfg)?, run_batch(&alt_cfg)?);
            let mut t = Table::new(&["statistic", "alpha", "power"]);
            for (stat, nd) in &null {
                for &alpha in &a.alpha {
                    t.push(vec![
                        json!(stat),
                        json!(alpha),
                        json!(power(nd, &alt[stat], alpha)?),
                    ]);
                }
            }
            ("power", params, t)
        }
        Command::Roc(a) => {
            if a.levels == 0 {
                return Err(Failure::Usage("--levels must be >= 1".into()));
            }
            let (null_cfg, alt_cfg) = null_and_alt(&a.mc, cli.seed)?;
            let params = json!({"null": null_cfg, "alternative": alt_cfg, "levels": a.levels});
            let (null, alt) = (run_batch(&null_cfg)?, run_batch(&alt_cfg)?);
            let levels = level_grid(a.levels);
            let mut t = Table::new(&["statistic", "alpha", "power"]);
            for (stat, nd) in &null {
                for (alpha, pw) in roc_curve(nd, &alt[stat], &levels)?.points {
                    t.push(vec![json!(stat), json!(alpha), json!(pw)]);
                }
            }
            ("roc", params, t)
        }
    };
    let manifest = RunManifest::new(name, cli.seed, params);
    output::emit(
        &table,
        &manifest,
        cli.format,
        cli.out.as_deref(),
        start.elapsed(),
    )?;
    Ok(())
}

fn norm(a: &args::NormArgs, seed: u64) -> Outcome<Table> {
    let estimate = gaussian_norm_mc(a.count, a.dim, seed)?;
    let oracle = gaussian_orlicz_constant(a.dim)?;
    let mut t = Table::new(&["dist", "dim", "count", "estimate", "oracle", "rel_error"]);
    t.push(vec![
        json!("gaussian"),
        json!(a.dim),
        json!(a.count),
        json!(estimate),
        json!(oracle),
        json!((estimate - oracle) / oracle),
    ]);
    Ok(t)
}

fn limit_params(a: &args::LimitArgs) -> Value {
    json!({"grid": a.grid, "reps": a.reps, "lags": a.lags})
}

fn ratio_tables(a: &args::LimitArgs, seed: u64) -> Outcome<Vec<RatioTable>> {
    Ok(brownian_ratio_tables(a.grid, a.reps, &a.lags, seed)?)
}

fn limit(a: &args::LimitArgs, seed: u64) -> Outcome<Table> {
    let mut t = Table::new(&["replicate", "lag", "h", "ratio"]);
    for table in ratio_tables(a, seed)? {
        for (h, ratio) in table.rows {
            let lag = (h * a.grid as f64).round() as u64;
            t.push(vec![
                json!(table.replicate),
                json!(lag),
                json!(h),
                json!(ratio),
            ]);
        }
    }
    Ok(t)
}

fn ratefit(a: &args::RatefitArgs, seed: u64) -> Outcome<Table> {
    let mut tables = ratio_tables(&a.limit, seed)?;
    for t in &mut tables {
        t.rows.retain(|&(h, _)| h >= a.h_min && h <= a.h_max);
    }
    let fit = deviation_rate_fit(&tables, &a.s_grid)?;
    let mut t = Table::new(&["quantity", "index", "value"]);
    t.push(vec![json!("slope"), Value::Null, json!(fit.slope)]);
    t.push(vec![
        json!("degenerate"),
        Value::Null,
        json!(fit.degenerate),
    ]);
    for (r, slope) in fit.per_replicate.iter().enumerate() {
        t.push(vec![json!("replicate_slope"), json!(r), json!(slope)]);
    }
    for (s, v) in fit.scaled_sup {
        t.push(vec![json!("scaled_sup"), json!(s), json!(v)]);
    }
    Ok(t)
}

fn tailbound(a: &args::TailArgs, seed: u64) -> Outcome<Table> {
    let grid = lemma36_p_grid();
    let mut t = Table::new(&[
        "h",
        "r",
        "lag",
        "threshold",
        "estimate",
        "std_error",
        "p_star",
        "bound",
        "consistent",
    ]);
    for &h in &a.h {
        for &r in &a.r {
            let est = tail_probability_mc(h, r, a.reps, a.grid, seed)?;
            let (p, bound) = lemma36_min_bound(&grid, r, h, a.h0, a.kappa)?;
            let consistent = bound >= 1.0 || est.estimate + 3.0 * est.std_error <= bound;
            t.push(vec![
                json!(h),
                json!(r),
                json!(est.lag),
                json!(est.threshold),
                json!(est.estimate),
                json!(est.std_error),
                json!(p),
                json!(bound),
                json!(consistent),
            ]);
        }
    }
    Ok(t)
}

fn shrinkcheck(a: &args::ShrinkArgs) -> Outcome<Table> {
    let mut t = Table::new(&["p", "k2", "integral", "bound", "ok"]);
    for &p in &a.p {
        for &k2 in &a.k2 {
            let c = shrink_bound_check(k2, p)?;
            t.push(vec![
                json!(p),
                json!(k2),
                json!(c.integral),
                json!(c.bound),
                json!(c.ok),
            ]);
        }
    }
    Ok(t)
}

fn lowerbound(a: &args::LowerBoundArgs) -> Outcome<Table> {
    let psi = YoungFunction::exponential(a.psi_p)?;
    let bound = prop52_lower_bound(a.delta, a.h, a.m, psi, a.rho)?;
    let mut t = Table::new(&["delta", "h", "m", "psi_p", "mu", "nu", "bound"]);
    t.push(vec![
        json!(a.delta),
        json!(a.h),
        json!(a.m),
        json!(a.psi_p),
        json!(a.rho.mu()),
        json!(a.rho.nu()),
        json!(bound),
    ]);
    Ok(t)
}

fn simulate(cfg: &McConfig) -> Outcome<Table> {
    let mut t = Table::new(&["statistic", "rank", "value"]);
    let dists: BTreeMap<String, EmpiricalDistribution> = run_batch(cfg)?;
    for (stat, d) in &dists {
        for (i, v) in d.samples().iter().enumerate() {
            t.push(vec![json!(stat), json!(i + 1), json!(v)]);
        }
    }
    Ok(t)
}

fn statistics(a: &McArgs) -> Outcome<Vec<StatisticSpec>> {
    let mut specs: Vec<StatisticSpec> = Vec::new();
    for &kind in &a.stat {
        if specs.iter().any(|s| s.kind == kind) {
            return Err(Failure::Usage(format!(
                "statistic `{}` listed twice",
                kind.name()
            )));
        }
        let mut spec = StatisticSpec::new(kind);
        if let Some(rho) = a.rho {
            if !matches!(kind, StatKind::Km | StatKind::Ds) {
                spec = spec.with_rho(rho);
            }
        }
        if let Some(lags) = &a.lags {
            spec = spec.with_lags(lags.clone());
        }
        if kind == StatKind::Bo {
            spec.scale = a.bo_scale;
        }
        specs.push(spec);
    }
    Ok(specs)
}

fn mc_config(a: &McArgs, seed: u64, alternative: bool) -> Outcome<McConfig> {
    let (model, n) = match a.model {
        ModelKind::WhiteNoise => {
            let n_drift = a.n_drift.unwrap_or(a.mesh as f64);
            (
                Model::WhiteNoise {
                    mesh: a.mesh,
                    n_drift,
                },
                n_drift,
            )
        }
        ModelKind::Regression => (
            Model::Regression {
                n: a.grid,
                noise: a.noise,
            },
            a.grid as f64,
        ),
    };
    let mut cfg = McConfig::new(a.reps, model, statistics(a)?, seed);
    match (&a.signal, alternative) {
        (Some(s), true) => {
            cfg = cfg
                .with_signal(s.resolve(n, a.auto_delta).map_err(Failure::Usage)?)
                .in_domain(StreamDomain::Alternative);
        }
        (None, true) => return Err(Failure::Usage("this command needs --signal".into())),
        _ if a.auto_delta && a.signal.is_none() => {
            return Err(Failure::Usage("--auto-delta needs --signal".into()))
        }
        _ => {}
    }
    Ok(cfg)
}

fn null_and_alt(a: &McArgs, seed: u64) -> Outcome<(McConfig, McConfig)> {
    Ok((mc_config(a, seed, false)?, mc_config(a, seed, true)?))
}
