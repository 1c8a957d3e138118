//! Multiscale scan statistics over all integer intervals `I = {a+1, ..., a+L}`.
//!
//! `T_n(I) = |Σ_{t∈I} X_t| / √|I|` is read off the prefix sums, so a full
//! scan costs `O(n²)`. The scale weight depends on `|I|` only, which lets the
//! inner loop reduce to a plain maximum of `|P_{a+L} - P_a|`.

use super::{ArgMax, StatValue};
use crate::error::Result;
use crate::processes::{partial_sum_step, Observations, PrefixSums};

/// `max_I T_n(I) / √(log(e n / |I|))`.
pub fn t_km(x: &Observations) -> Result<StatValue> {
    let prefix = partial_sum_step(x);
    let n = prefix.len() as f64;
    Ok(scan(&prefix, "km", |len, top| {
        let l = len as f64;
        top / (l * (1.0 + (n / l).ln())).sqrt()
    }))
}

/// `max_I T_n(I) - √(2 log(e n / |I|))`.
pub fn t_ds(x: &Observations) -> Result<StatValue> {
    let prefix = partial_sum_step(x);
    let n = prefix.len() as f64;
    Ok(scan(&prefix, "ds", |len, top| {
        let l = len as f64;
        top / l.sqrt() - (2.0 * (1.0 + (n / l).ln())).sqrt()
    }))
}

/// `score(len, max_a |P_{a+len} - P_a|)` must be increasing in its second
/// argument; the witness is `(len, a)`.
fn scan(prefix: &PrefixSums, name: &str, score: impl Fn(usize, f64) -> f64) -> StatValue {
    let n = prefix.len();
    let mut best = ArgMax::new();
    let raw = prefix.raw();
    for len in 1..=n {
        let (mut top, mut at) = (f64::NEG_INFINITY, 0);
        if prefix.dim() == 1 {
            for (a, (hi, lo)) in raw[len..].iter().zip(&raw[..=n - len]).enumerate() {
                let v = (hi - lo).abs();
                if v > top {
                    top = v;
                    at = a;
                }
            }
        } else {
            for a in 0..=n - len {
                let v = prefix.block_norm(a, a + len);
                if v > top {
                    top = v;
                    at = a;
                }
            }
        }
        best.offer(score(len, top), len, Some(at));
    }
    best.finish(name)
}
