//! Closed-form lower bounds on the seminorm of an antiderivative `F` when the
//! signal keeps magnitude `δ` with a constant sign on `m` disjoint intervals of
//! length at least `2h`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::orlicz::{Modulus, YoungFunction};

/// Specialised forms of the general bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LowerBoundDisplay {
    /// `B^{1/2}_{Ψ_2,∞}`: `δ √h |log(e/(mh))|^{-1/2}`.
    SubGaussianSqrt,
    /// `B^{ρ_ν}_{∞,∞}`: `δ √h |log(e/h)|^{-1/ν}`.
    HolderLog { nu: f64 },
    /// `B^{1/2}_{p,∞}`: `δ √h (mh)^{1/p}`.
    PowerSqrt { p: f64 },
    /// `B^{ρ_ν}_{Ψ_p,∞}`: `δ √h |log(e/h)|^{-1/ν} |log(e/(mh))|^{-1/p}`.
    ExponentialLog { p: f64, nu: f64 },
}

fn check(h: f64, m: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(domain("h", h, "(0, 1)"));
    }
    if !(m > 0.0) || !(m * h <= 1.0) {
        return Err(domain("m*h", m * h, "(0, 1]"));
    }
    Ok(())
}

/// `δ h / (ρ(h) Ψ^{-1}(1/(mh)))`.
pub fn prop52_lower_bound(
    delta: f64,
    h: f64,
    m: f64,
    psi: YoungFunction,
    rho: Modulus,
) -> Result<f64> {
    check(h, m)?;
    Ok(delta * h / (rho.eval(h)? * psi.inverse(1.0 / (m * h))?))
}

pub fn prop52_display(display: LowerBoundDisplay, delta: f64, h: f64, m: f64) -> Result<f64> {
    check(h, m)?;
    let base = delta * h.sqrt();
    let log_h = (1.0 - h.ln()).abs();
    let log_mh = (1.0 - (m * h).ln()).abs();
    Ok(match display {
        LowerBoundDisplay::SubGaussianSqrt => base / log_mh.sqrt(),
        LowerBoundDisplay::HolderLog { nu } => base * log_h.powf(-1.0 / nu),
        LowerBoundDisplay::PowerSqrt { p } => base * (m * h).powf(1.0 / p),
        LowerBoundDisplay::ExponentialLog { p, nu } => {
            base * log_h.powf(-1.0 / nu) * log_mh.powf(-1.0 / p)
        }
    })
}
