//! Exhaustive reimplementations shared by the oracle tests and the
//! acceptance suite.
#![allow(dead_code)]

use besov_orlicz::processes::{NoiseFamily, RngSpec};
use rand::Rng;

pub const TOL: f64 = 1e-9;

/// Smallest K with `w Σ (exp((v/K)^2) - 1) <= 1`, by bisection on K.
pub fn bisect_psi2(values: &[f64], w: f64) -> f64 {
    if values.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let g = |k: f64| {
        w * values
            .iter()
            .map(|v| ((v / k).powi(2)).exp_m1())
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    while g(hi) > 1.0 {
        hi *= 2.0;
    }
    lo = lo.max(hi / 2.0);
    while g(lo) <= 1.0 {
        lo /= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

pub fn sums(x: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0];
    for v in x {
        p.push(p.last().unwrap() + v);
    }
    p
}

pub fn brute_km(x: &[f64]) -> f64 {
    let n = x.len();
    let mut best = f64::NEG_INFINITY;
    for a in 0..n {
        for b in a + 1..=n {
            let s: f64 = x[a..b].iter().sum();
            let len = (b - a) as f64;
            let t = s.abs() / len.sqrt();
            best = best.max(t / (1.0 + (n as f64 / len).ln()).sqrt());
        }
    }
    best
}

pub fn brute_ds(x: &[f64]) -> f64 {
    let n = x.len();
    let mut best = f64::NEG_INFINITY;
    for a in 0..n {
        for b in a + 1..=n {
            let s: f64 = x[a..b].iter().sum();
            let len = (b - a) as f64;
            best = best.max(s.abs() / len.sqrt() - (2.0 * (1.0 + (n as f64 / len).ln())).sqrt());
        }
    }
    best
}

pub fn brute_bo(path: &[f64], mu: f64) -> f64 {
    let n = path.len() - 1;
    (1..=n)
        .map(|m| {
            let inc: Vec<f64> = (0..=n - m).map(|a| (path[a + m] - path[a]).abs()).collect();
            let h = m as f64 / n as f64;
            bisect_psi2(&inc, 1.0 / n as f64) / h.powf(mu)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn rho_log(h: f64) -> f64 {
    (h * (1.0 - h.ln())).sqrt()
}

pub fn brute_holder(path: &[f64]) -> f64 {
    let n = path.len() - 1;
    let mut best = f64::NEG_INFINITY;
    for m in 1..=n {
        for a in 0..=n - m {
            best = best.max((path[a + m] - path[a]).abs() / rho_log(m as f64 / n as f64));
        }
    }
    best
}

pub fn contrasts(path: &[f64], m: usize) -> Vec<f64> {
    let n = path.len() - 1;
    (m..=n - m)
        .map(|a| ((path[a] - path[a - m]) - (path[a + m] - path[a])).abs())
        .collect()
}

pub fn brute_cp_holder(path: &[f64]) -> f64 {
    let n = path.len() - 1;
    (1..=n / 2)
        .flat_map(|m| {
            let r = (m as f64 / n as f64).sqrt();
            contrasts(path, m).into_iter().map(move |c| c / r)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn brute_cp_orlicz(path: &[f64]) -> f64 {
    let n = path.len() - 1;
    (1..=n / 2)
        .map(|m| {
            let r = (m as f64 / n as f64).sqrt();
            let v: Vec<f64> = contrasts(path, m).into_iter().map(|c| c / r).collect();
            bisect_psi2(&v, 1.0 / n as f64)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * b.abs().max(1.0)
}

pub fn instance(i: u64) -> Vec<f64> {
    let mut rng = RngSpec::new(2024, i).rng();
    let n = rng.random_range(1..=16);
    let family = if i % 2 == 0 {
        NoiseFamily::Gaussian
    } else {
        NoiseFamily::Rademacher
    };
    let shift = if i % 5 == 0 {
        rng.random_range(-2.0..2.0)
    } else {
        0.0
    };
    (0..n).map(|_| family.draw(&mut rng) + shift).collect()
}
