//! Test signals on `[0, 1]` and their antiderivatives `F(u) = ∫_0^u f`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature;

/// Doppler antiderivatives are integrated in `w = 4/v`; beyond this point the
/// remaining tail `∫_W^∞ sin(w)/w² dw` is taken from its asymptotic series.
const DOPPLER_TAIL_START: f64 = 1000.0;
const DOPPLER_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SignalSpec {
    Zero,
    /// Alternating blocks of length `l`: on block `k` the signal is
    /// `δ η_k` on `[2kl, (2k+1)l)` and `-δ η_k` on `[(2k+1)l, 2(k+1)l)`.
    Flip {
        l: f64,
        delta: f64,
        signs: Vec<i8>,
    },
    /// `δ sin(4/u)`, set to 0 at `u = 0`.
    Doppler {
        delta: f64,
    },
    /// `δ sin(u/l)`.
    Sine {
        delta: f64,
        l: f64,
    },
    /// `δ 1(u ∈ [a, b])`.
    Bump {
        a: f64,
        b: f64,
        delta: f64,
    },
}

impl SignalSpec {
    pub fn flip(l: f64, delta: f64, signs: Vec<i8>) -> Result<Self> {
        let blocks = flip_blocks(l)?;
        check_finite("delta", delta)?;
        if signs.len() != blocks {
            return Err(Error::InvalidParameter(format!(
                "flip with l = {l} needs {blocks} signs, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(
                "flip signs must be +1 or -1".into(),
            ));
        }
        Ok(SignalSpec::Flip { l, delta, signs })
    }

    /// Flip signal with iid Rademacher signs drawn from `rng`.
    pub fn flip_random<R: Rng + ?Sized>(l: f64, delta: f64, rng: &mut R) -> Result<Self> {
        let blocks = flip_blocks(l)?;
        let signs = (0..blocks)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        Self::flip(l, delta, signs)
    }

    /// Flip signal with signs `+1, -1, +1, ...`.
    pub fn flip_alternating(l: f64, delta: f64) -> Result<Self> {
        let blocks = flip_blocks(l)?;
        let signs = (0..blocks)
            .map(|k| if k % 2 == 0 { 1 } else { -1 })
            .collect();
        Self::flip(l, delta, signs)
    }

    pub fn doppler(delta: f64) -> Result<Self> {
        check_finite("delta", delta)?;
        Ok(SignalSpec::Doppler { delta })
    }

    pub fn sine(delta: f64, l: f64) -> Result<Self> {
        check_finite("delta", delta)?;
        if !(l > 0.0) || l.is_infinite() {
            return Err(domain("l", l, "(0, inf)"));
        }
        Ok(SignalSpec::Sine { delta, l })
    }

    pub fn bump(a: f64, b: f64, delta: f64) -> Result<Self> {
        check_finite("delta", delta)?;
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bump needs 0 <= a < b <= 1, got a = {a}, b = {b}"
            )));
        }
        Ok(SignalSpec::Bump { a, b, delta })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            SignalSpec::Zero => 0.0,
            SignalSpec::Flip { l, delta, signs } => {
                let (k, r) = flip_position(*l, signs.len(), u);
                let s = f64::from(signs[k]) * delta;
                if r < *l {
                    s
                } else {
                    -s
                }
            }
            SignalSpec::Doppler { delta } => {
                if u == 0.0 {
                    0.0
                } else {
                    delta * (4.0 / u).sin()
                }
            }
            SignalSpec::Sine { delta, l } => delta * (u / l).sin(),
            SignalSpec::Bump { a, b, delta } => {
                if (*a..=*b).contains(&u) {
                    *delta
                } else {
                    0.0
                }
            }
        }
    }

    pub fn antiderivative(&self, u: f64) -> f64 {
        match self {
            SignalSpec::Zero => 0.0,
            SignalSpec::Flip { l, delta, signs } => {
                let (k, r) = flip_position(*l, signs.len(), u);
                let s = f64::from(signs[k]) * delta;
                if r < *l {
                    s * r
                } else {
                    s * (2.0 * l - r)
                }
            }
            SignalSpec::Doppler { delta } => delta * doppler_unit_antiderivative(u),
            SignalSpec::Sine { delta, l } => delta * l * (1.0 - (u / l).cos()),
            SignalSpec::Bump { a, b, delta } => delta * (u.clamp(*a, *b) - a),
        }
    }

    /// `F(i/N)` for `i = 0..=N`.
    pub fn antiderivative_on_grid(&self, grid: usize) -> Vec<f64> {
        (0..=grid)
            .map(|i| self.antiderivative(i as f64 / grid as f64))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SignalSpec::Zero => true,
            SignalSpec::Flip { delta, .. }
            | SignalSpec::Doppler { delta }
            | SignalSpec::Sine { delta, .. }
            | SignalSpec::Bump { delta, .. } => *delta == 0.0,
        }
    }
}

fn check_finite(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(what, v, "finite"))
    }
}

/// Number of signs a flip signal with block length `l = 2^{-j}` carries.
pub fn flip_blocks(l: f64) -> Result<usize> {
    if !(l > 0.0 && l <= 0.5) {
        return Err(domain("l", l, "2^-j for integer j >= 1"));
    }
    let j = -l.log2();
    if j.fract() != 0.0 {
        return Err(domain("l", l, "2^-j for integer j >= 1"));
    }
    Ok((1.0 / (2.0 * l)).ceil() as usize + 1)
}

fn flip_position(l: f64, blocks: usize, u: f64) -> (usize, f64) {
    let k = ((u / (2.0 * l)).floor().max(0.0) as usize).min(blocks - 1);
    (k, u - 2.0 * k as f64 * l)
}

/// `∫_0^u sin(4/v) dv = 4 ∫_{4/u}^∞ sin(w)/w² dw`.
fn doppler_unit_antiderivative(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let start = 4.0 / u;
    let tail_from = start.max(DOPPLER_TAIL_START);
    let body = if start < tail_from {
        quadrature::integrate(
            |w: f64| w.sin() / (w * w),
            start,
            tail_from,
            DOPPLER_ABS_TOL,
            0.0,
        )
        .value
    } else {
        0.0
    };
    4.0 * (body + sine_over_square_tail(tail_from))
}

/// Asymptotic series for `∫_W^∞ sin(w)/w² dw`, obtained by repeated
/// integration by parts:
/// `Σ_k (-1)^k (2k+1)! / W^{2k+2} cos W  +  (-1)^k (2k+2)! / W^{2k+3} sin W`.
fn sine_over_square_tail(w: f64) -> f64 {
    let (s, c) = w.sin_cos();
    let mut total = 0.0;
    // term_j = j! / W^(j+1), starting at j = 1
    let mut term = 1.0 / (w * w);
    let mut sign = 1.0;
    for j in 1..20 {
        let contrib = if j % 2 == 1 { c } else { s };
        total += sign * term * contrib;
        if j % 2 == 0 {
            sign = -sign;
        }
        let next = term * (j + 1) as f64 / w;
        if next > term || next < 1e-300 {
            break;
        }
        term = next;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_examples() {
        let mut signs = vec![-1i8; flip_blocks(1.0 / 16.0).unwrap()];
        signs[0] = 1;
        let f = SignalSpec::flip(1.0 / 16.0, 1.0, signs).unwrap();
        assert_eq!(f.eval(0.03), 1.0);
        assert_eq!(f.eval(0.1), -1.0);
        for k in 0..=8 {
            let u = 2.0 * k as f64 / 16.0;
            assert_eq!(f.antiderivative(u), 0.0, "u={u}");
        }
    }

    #[test]
    fn flip_validation() {
        assert!(SignalSpec::flip_alternating(0.3, 1.0).is_err());
        assert!(SignalSpec::flip_alternating(1.0, 1.0).is_err());
        assert_eq!(flip_blocks(0.25).unwrap(), 3);
        assert!(SignalSpec::flip(0.25, 1.0, vec![1, 1]).is_err());
        assert!(SignalSpec::flip(0.25, 1.0, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn bump_and_sine() {
        let b = SignalSpec::bump(0.2, 0.6, 3.0).unwrap();
        assert!((b.antiderivative(0.7) - 1.2).abs() < 1e-15);
        assert!((b.antiderivative(0.6) - 1.2).abs() < 1e-15);
        assert_eq!(b.antiderivative(0.1), 0.0);
        assert!(SignalSpec::bump(0.6, 0.2, 1.0).is_err());

        let s = SignalSpec::sine(2.0, 0.1).unwrap();
        let u = 0.37;
        let expect = 2.0 * 0.1 * (1.0 - (u / 0.1f64).cos());
        assert!((s.antiderivative(u) - expect).abs() < 1e-15);
    }

    #[test]
    fn doppler_zero_of_sine() {
        let d = SignalSpec::doppler(1.5).unwrap();
        assert!(d.eval(2.0 / std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(d.eval(0.0), 0.0);
        assert_eq!(d.antiderivative(0.0), 0.0);
    }

    #[test]
    fn tail_series_matches_quadrature() {
        // ∫_W^{W+2000π} sin/w² + tail(W+2000π) == tail(W)
        let w = 50.0;
        let upper = w + 2000.0 * std::f64::consts::PI;
        let body = quadrature::integrate(|x: f64| x.sin() / (x * x), w, upper, 1e-14, 0.0).value;
        let lhs = body + sine_over_square_tail(upper);
        assert!((lhs - sine_over_square_tail(w)).abs() < 1e-12);
    }
}
