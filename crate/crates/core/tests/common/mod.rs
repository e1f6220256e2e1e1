//! Independent reference formulas for the integration tests.
//!
//! Everything here is written directly from the definitions with plain
//! `exp` sums, without the log-domain helpers of the library.
#![allow(dead_code)]

use rand::Rng;

pub const T_HOT: f64 = 15.0;
pub const T_COLD: f64 = 10.0;

pub fn bh() -> f64 {
    1.0 / T_HOT
}

pub fn bc() -> f64 {
    1.0 / T_COLD
}

pub fn omega(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    e * (beta_c - beta_h) / (1.0 + (-beta_c * e).exp())
}

pub fn qubit_probs(e: f64, beta: f64) -> [f64; 2] {
    let w = (-beta * e).exp();
    [1.0 / (1.0 + w), w / (1.0 + w)]
}

pub fn qubit_variance(e: f64, beta: f64) -> f64 {
    let p = qubit_probs(e, beta);
    e * e * p[0] * p[1]
}

/// `B_alpha` as the weighted average of `<H>_c - E_i`.
pub fn b_alpha(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> f64 {
    let (p, q) = (qubit_probs(e, beta_c), qubit_probs(e, beta_h));
    let mean = p[1] * e;
    let w: Vec<f64> = (0..2).map(|i| p[i].powf(alpha) * q[i].powf(1.0 - alpha)).collect();
    (w[0] * mean + w[1] * (mean - e)) / (w[0] + w[1])
}

pub fn gamma(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> f64 {
    alpha * b_alpha(e, beta_c, beta_h, alpha) / (alpha - 1.0)
}

pub fn gamma_one(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    (beta_c - beta_h) * qubit_variance(e, beta_c)
}

pub fn gamma_inf(e: f64, beta_c: f64) -> f64 {
    e / (1.0 + (beta_c * e).exp())
}

/// `(1 + beta_h/(beta_c - beta_h) max(1, Omega))^-1`.
pub fn eta_quasistatic(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    1.0 / (1.0 + beta_h / (beta_c - beta_h) * omega(e, beta_c, beta_h).max(1.0))
}

pub fn carnot(beta_c: f64, beta_h: f64) -> f64 {
    1.0 - beta_h / beta_c
}

/// Plain Rényi divergence of two full-support distributions, finite alpha != 1.
pub fn renyi(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum();
    s.ln() / (alpha - 1.0)
}

pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).ln()).sum()
}

/// Bisection without the library helper.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn random_probs<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn random_levels<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..scale)).collect();
    v[0] = 0.0;
    v
}
