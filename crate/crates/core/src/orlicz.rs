//! Young functions, smoothness gauges and the empirical Orlicz-norm solver.
//!
//! Every Orlicz-type statistic in this crate reduces to the same problem:
//! given nonnegative magnitudes `v_i` carrying a uniform weight `w`, find
//!
//! ```text
//! K* = inf { K > 0 : w * Σ Ψ(v_i / K) <= budget }.
//! ```
//!
//! For the exponential family `Ψ_p(x) = exp(x^p) - 1` the left-hand side is
//! continuous and strictly decreasing in `K` as soon as one magnitude is
//! positive, so `K*` is the unique root of `w * Σ Ψ(v_i / K) = budget`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Arguments of `exp` above this value overflow `f64`.
const EXP_OVERFLOW: f64 = 709.0;
const MAX_ITER: usize = 200;
/// Relative width of the final bracket in the `s = K^{-p}` variable.
const SOLVER_RTOL: f64 = 1e-14;

/// Convex gauge `Ψ` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum YoungFunction {
    /// `Ψ_p(x) = exp(x^p) - 1`.
    Exponential(f64),
    /// `Ψ(x) = x^p`.
    Power(f64),
}

impl YoungFunction {
    /// The sub-Gaussian gauge `Ψ_2`.
    pub const PSI2: YoungFunction = YoungFunction::Exponential(2.0);

    pub fn exponential(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(YoungFunction::Exponential(p))
    }

    pub fn power(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(YoungFunction::Power(p))
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            YoungFunction::Exponential(p) | YoungFunction::Power(p) => p,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || x.is_infinite() {
            return Err(domain("x", x, "[0, inf)"));
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(domain("y", y, "[0, inf]"));
        }
        Ok(match *self {
            YoungFunction::Exponential(p) => y.ln_1p().powf(1.0 / p),
            YoungFunction::Power(p) => y.powf(1.0 / p),
        })
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match *self {
            YoungFunction::Exponential(p) => pow_fast(x, p).exp_m1(),
            YoungFunction::Power(p) => pow_fast(x, p),
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(domain("p", p, "[1, inf)"))
    }
}

#[inline]
fn pow_fast(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// Smoothness gauge `ρ(h) = h^μ · (log(e/h))^ν` on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    mu: f64,
    nu: f64,
}

impl Modulus {
    /// `ρ(h) = √h`, the critical Brownian modulus.
    pub const SQRT: Modulus = Modulus { mu: 0.5, nu: 0.0 };
    /// `ρ(h) = √(h log(e/h))`, the Hölderian multiscale modulus.
    pub const SQRT_LOG: Modulus = Modulus { mu: 0.5, nu: 0.5 };

    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(domain("mu", mu, "(0, 1]"));
        }
        if !(nu >= 0.0) || nu.is_infinite() {
            return Err(domain("nu", nu, "[0, inf)"));
        }
        Ok(Modulus { mu, nu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn eval(&self, h: f64) -> Result<f64> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(domain("h", h, "(0, 1]"));
        }
        Ok(self.eval_unchecked(h))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, h: f64) -> f64 {
        let base = if self.mu == 0.5 {
            h.sqrt()
        } else {
            h.powf(self.mu)
        };
        if self.nu == 0.0 {
            base
        } else {
            base * (1.0 - h.ln()).powf(self.nu)
        }
    }
}

/// Nonnegative magnitudes sharing one uniform weight.
#[derive(Debug, Clone, Copy)]
pub struct WeightedMagnitudes<'a> {
    values: &'a [f64],
    weight: f64,
}

impl<'a> WeightedMagnitudes<'a> {
    pub fn new(values: &'a [f64], weight: f64) -> Result<Self> {
        if !(weight > 0.0) || weight.is_infinite() {
            return Err(domain("weight", weight, "(0, inf)"));
        }
        for (index, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if v < 0.0 {
                return Err(domain("magnitude", v, "[0, inf)"));
            }
        }
        Ok(WeightedMagnitudes { values, weight })
    }

    /// Magnitudes with the uniform weight `1 / len`.
    pub fn uniform(values: &'a [f64]) -> Result<Self> {
        Self::new(values, 1.0 / values.len().max(1) as f64)
    }

    pub fn values(&self) -> &[f64] {
        self.values
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `weight · Σ Ψ(v_i / k)`.
    pub fn gauge_sum(&self, psi: YoungFunction, k: f64) -> f64 {
        self.weight
            * self
                .values
                .iter()
                .map(|&v| psi.eval_unchecked(v / k))
                .sum::<f64>()
    }
}

/// `Ψ(x)`; errors on negative or non-finite `x`.
pub fn young_eval(psi: YoungFunction, x: f64) -> Result<f64> {
    psi.eval(x)
}

/// `Ψ^{-1}(y)`.
pub fn young_inv(psi: YoungFunction, y: f64) -> Result<f64> {
    psi.inverse(y)
}

/// `ρ(h)` for `h ∈ (0, 1]`.
pub fn modulus_eval(rho: Modulus, h: f64) -> Result<f64> {
    rho.eval(h)
}

/// Solve `weight · Σ Ψ(v_i / K) = budget` for `K`.
///
/// Returns 0 when every magnitude is zero (including the empty case).
/// The root is bracketed by doubling/halving `K` from the root-mean-square
/// of the data and then refined in the variable `s = K^{-p}`, where the
/// exponential objective is convex and increasing: Newton steps taken from
/// inside the bracket, falling back to bisection whenever a step leaves the
/// bracket or fails to halve it.
pub fn empirical_orlicz_norm(
    data: &WeightedMagnitudes<'_>,
    psi: YoungFunction,
    budget: f64,
) -> Result<f64> {
    if !(budget > 0.0) || budget.is_infinite() {
        return Err(domain("budget", budget, "(0, inf)"));
    }
    check_exponent(psi.exponent())?;
    Ok(solve(data.values, data.weight, psi, budget))
}

pub(crate) fn solve(values: &[f64], weight: f64, psi: YoungFunction, budget: f64) -> f64 {
    match psi {
        YoungFunction::Power(p) => {
            let total: f64 = values.iter().map(|&v| pow_fast(v, p)).sum();
            if total == 0.0 {
                0.0
            } else {
                (weight * total / budget).powf(1.0 / p)
            }
        }
        YoungFunction::Exponential(p) => solve_exponential(values, weight, p, budget),
    }
}

fn solve_exponential(values: &[f64], weight: f64, p: f64, budget: f64) -> f64 {
    let q: Vec<f64> = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| pow_fast(v, p))
        .collect();
    if q.is_empty() {
        return 0.0;
    }
    let target = budget / weight;

    // f(s) = Σ expm1(q_i s) - target and its derivative; +inf on overflow.
    let eval = |s: f64| -> (f64, f64) {
        let mut f = 0.0;
        let mut df = 0.0;
        for &qi in &q {
            let arg = qi * s;
            if arg > EXP_OVERFLOW {
                return (f64::INFINITY, f64::INFINITY);
            }
            let e = arg.exp_m1();
            f += e;
            df += qi * (e + 1.0);
        }
        (f - target, df)
    };

    let rms = (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt();
    let mut k = rms;
    let to_s = |k: f64| k.powf(-p);

    // Bracket [s_lo, s_hi] with f(s_lo) <= 0 < f(s_hi).
    let (mut lo, mut hi);
    let (mut x, mut fx, mut dfx);
    let first = eval(to_s(k));
    if first.0 > 0.0 {
        hi = to_s(k);
        (x, fx, dfx) = (hi, first.0, first.1);
        loop {
            k *= 2.0;
            let s = to_s(k);
            let (f, df) = eval(s);
            if f <= 0.0 {
                lo = s;
                if f == 0.0 {
                    return k;
                }
                break;
            }
            hi = s;
            (x, fx, dfx) = (s, f, df);
        }
    } else {
        if first.0 == 0.0 {
            return k;
        }
        lo = to_s(k);
        loop {
            k *= 0.5;
            let s = to_s(k);
            let (f, df) = eval(s);
            if f > 0.0 {
                hi = s;
                (x, fx, dfx) = (s, f, df);
                break;
            }
            lo = s;
            if f == 0.0 {
                return k;
            }
        }
    }

    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    for _ in 0..MAX_ITER {
        let newton = if fx.is_finite() && dfx > 0.0 {
            let step = fx / dfx;
            let next = x - step;
            (next > lo && next < hi && (2.0 * fx).abs() <= (dx_old * dfx).abs()).then_some(step)
        } else {
            None
        };
        dx_old = dx;
        match newton {
            Some(step) => {
                dx = step;
                x -= step;
            }
            None => {
                dx = 0.5 * (hi - lo);
                x = lo + dx;
            }
        }
        (fx, dfx) = eval(x);
        if fx == 0.0 {
            break;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if dx.abs() <= SOLVER_RTOL * x || hi - lo <= SOLVER_RTOL * hi {
            break;
        }
    }
    x.powf(-1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rtol: f64) -> bool {
        (a - b).abs() <= rtol * b.abs().max(1e-300)
    }

    #[test]
    fn young_eval_examples() {
        let psi2 = YoungFunction::PSI2;
        assert!(close(
            psi2.eval(1.0).unwrap(),
            std::f64::consts::E - 1.0,
            1e-15
        ));
        assert_eq!(psi2.eval(0.0).unwrap(), 0.0);
        let psi1 = YoungFunction::exponential(1.0).unwrap();
        assert!(close(psi1.eval(2.0).unwrap(), 2f64.exp() - 1.0, 1e-15));
        assert!(psi2.eval(-1.0).is_err());
        assert!(psi2.eval(f64::NAN).is_err());
    }

    #[test]
    fn young_inv_examples() {
        let psi2 = YoungFunction::PSI2;
        assert!(close(psi2.inverse(1.0).unwrap(), 2f64.ln().sqrt(), 1e-15));
        assert_eq!(psi2.inverse(0.0).unwrap(), 0.0);
        assert!(close(psi2.inverse(2.0).unwrap(), 1.048147, 1e-6));
        assert!(close(
            YoungFunction::power(3.0).unwrap().inverse(8.0).unwrap(),
            2.0,
            1e-15
        ));
        assert!(psi2.inverse(-0.5).is_err());
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert!(YoungFunction::exponential(0.5).is_err());
        assert!(YoungFunction::power(f64::NAN).is_err());
    }

    #[test]
    fn inverse_roundtrip_on_log_grid() {
        for psi in [
            YoungFunction::PSI2,
            YoungFunction::Exponential(1.0),
            YoungFunction::Exponential(1.5),
            YoungFunction::Power(3.0),
        ] {
            for i in 0..=200 {
                let x = 1e-6 * (2e7f64).powf(i as f64 / 200.0);
                let y = psi.eval(x).unwrap();
                if y.is_infinite() {
                    continue;
                }
                let back = psi.inverse(y).unwrap();
                assert!(close(back, x, 1e-10), "{psi:?} x={x} back={back}");
            }
        }
    }

    #[test]
    fn modulus_examples() {
        let rho = Modulus::SQRT_LOG;
        assert!(close(rho.eval(1.0).unwrap(), 1.0, 1e-15));
        assert!(close(Modulus::SQRT.eval(0.25).unwrap(), 0.5, 1e-15));
        let h = (-1f64).exp();
        assert!(close(
            rho.eval(h).unwrap(),
            2f64.sqrt() * (-0.5f64).exp(),
            1e-15
        ));
        assert!((rho.eval(h).unwrap() - 0.857763).abs() < 1e-6);
        assert!(rho.eval(0.0).is_err());
        assert!(rho.eval(1.5).is_err());
        assert!(Modulus::new(0.0, 0.0).is_err());
        assert!(Modulus::new(0.5, -1.0).is_err());
    }

    #[test]
    fn modulus_increasing() {
        // monotone on (0, 1] exactly when nu <= mu
        let rho = Modulus::new(0.3, 0.3).unwrap();
        let mut prev = 0.0;
        for i in 1..=1000 {
            let v = rho.eval(i as f64 / 1000.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn norm_closed_forms() {
        let psi2 = YoungFunction::PSI2;
        let one = [1.0];
        let k =
            empirical_orlicz_norm(&WeightedMagnitudes::new(&one, 1.0).unwrap(), psi2, 1.0).unwrap();
        assert!(close(k, 1.0 / 2f64.ln().sqrt(), 1e-10));

        let two = [0.0, 1.0];
        let k =
            empirical_orlicz_norm(&WeightedMagnitudes::new(&two, 0.5).unwrap(), psi2, 1.0).unwrap();
        assert!(close(k, 1.0 / 3f64.ln().sqrt(), 1e-10));
    }

    #[test]
    fn norm_zero_and_empty() {
        let zeros = [0.0; 7];
        let data = WeightedMagnitudes::uniform(&zeros).unwrap();
        assert_eq!(
            empirical_orlicz_norm(&data, YoungFunction::PSI2, 1.0).unwrap(),
            0.0
        );
        let data = WeightedMagnitudes::uniform(&[]).unwrap();
        assert_eq!(
            empirical_orlicz_norm(&data, YoungFunction::PSI2, 1.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn norm_rejects_bad_input() {
        assert!(matches!(
            WeightedMagnitudes::new(&[1.0, f64::NAN], 0.5),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(WeightedMagnitudes::new(&[-1.0], 1.0).is_err());
        assert!(WeightedMagnitudes::new(&[1.0], 0.0).is_err());
        let data = WeightedMagnitudes::new(&[1.0], 1.0).unwrap();
        assert!(empirical_orlicz_norm(&data, YoungFunction::PSI2, 0.0).is_err());
    }

    #[test]
    fn power_norm_is_lp_mean() {
        let v = [1.0, 2.0, 3.0];
        let data = WeightedMagnitudes::uniform(&v).unwrap();
        let k = empirical_orlicz_norm(&data, YoungFunction::Power(2.0), 1.0).unwrap();
        assert!(close(k, (14.0f64 / 3.0).sqrt(), 1e-14));
    }

    #[test]
    fn solver_survives_huge_spread() {
        // One enormous value next to many tiny ones forces the overflow guard.
        let mut v = vec![1e-8; 1000];
        v.push(1e6);
        let data = WeightedMagnitudes::uniform(&v).unwrap();
        let k = empirical_orlicz_norm(&data, YoungFunction::PSI2, 1.0).unwrap();
        let resid = data.gauge_sum(YoungFunction::PSI2, k);
        assert!((resid - 1.0).abs() < 1e-8, "k={k} resid={resid}");
    }

    #[test]
    fn budget_changes_root() {
        let v = [1.0, 1.0];
        let data = WeightedMagnitudes::new(&v, 0.5).unwrap();
        // (exp(1/K^2) - 1) = 3  =>  K = 1/sqrt(ln 4)
        let k = empirical_orlicz_norm(&data, YoungFunction::PSI2, 3.0).unwrap();
        assert!(close(k, 1.0 / 4f64.ln().sqrt(), 1e-10));
    }
}
