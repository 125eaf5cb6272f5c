//! Oracles shared by the integration tests. Nothing here calls into the
//! library's numerical routines.
#![allow(dead_code)]

use divgeo::density_core::C64;
use rand::Rng;

/// `ln Z + beta sum_j n_j (eps_j - mu)` evaluated term by term.
pub fn divergence_oracle(levels: &[f64], n: &[f64], beta: f64, mu: f64) -> f64 {
    let mut d = 0.0;
    for (e, nj) in levels.iter().zip(n) {
        d -= (1.0 - (-beta * (e - mu)).exp()).ln();
        d += beta * nj * (e - mu);
    }
    d
}

fn divergence_complex(levels: &[f64], n: &[f64], beta: C64, mu: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    for (e, nj) in levels.iter().zip(n) {
        let gap = beta * (C64::new(*e, 0.0) - mu);
        d -= (one - (-gap).exp()).ln();
        d += gap * *nj;
    }
    d
}

/// Central-difference step used by every oracle: `1e-5 * max(1, |x|)`.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Central differences of the divergence.
pub fn fd_gradient(levels: &[f64], n: &[f64], beta: f64, mu: f64) -> [f64; 2] {
    let hb = fd_step(beta);
    let hm = fd_step(mu);
    [
        (divergence_oracle(levels, n, beta + hb, mu) - divergence_oracle(levels, n, beta - hb, mu))
            / (2.0 * hb),
        (divergence_oracle(levels, n, beta, mu + hm) - divergence_oracle(levels, n, beta, mu - hm))
            / (2.0 * hm),
    ]
}

/// Complex-step gradient `Im D(x + i h) / h`; free of subtractive cancellation.
pub fn complex_step_gradient(levels: &[f64], n: &[f64], beta: f64, mu: f64) -> [f64; 2] {
    let h = 1e-30;
    let b = divergence_complex(levels, n, C64::new(beta, h), C64::new(mu, 0.0));
    let m = divergence_complex(levels, n, C64::new(beta, 0.0), C64::new(mu, h));
    [b.im / h, m.im / h]
}

/// Hessian by central differences (step [`fd_step`]) of the complex-step gradient.
pub fn fd_hessian(levels: &[f64], n: &[f64], beta: f64, mu: f64) -> [[f64; 2]; 2] {
    let hb = fd_step(beta);
    let hm = fd_step(mu);
    let gp = complex_step_gradient(levels, n, beta + hb, mu);
    let gm = complex_step_gradient(levels, n, beta - hb, mu);
    let col_beta = [(gp[0] - gm[0]) / (2.0 * hb), (gp[1] - gm[1]) / (2.0 * hb)];
    let gp = complex_step_gradient(levels, n, beta, mu + hm);
    let gm = complex_step_gradient(levels, n, beta, mu - hm);
    let col_mu = [(gp[0] - gm[0]) / (2.0 * hm), (gp[1] - gm[1]) / (2.0 * hm)];
    let cross = 0.5 * (col_beta[1] + col_mu[0]);
    [[col_beta[0], cross], [cross, col_mu[1]]]
}

/// Random strictly increasing spectrum of `j` levels and a valid `(beta, mu)`.
pub fn random_bose_problem<R: Rng>(rng: &mut R, j: usize) -> (Vec<f64>, f64, f64) {
    let mut levels = Vec::with_capacity(j);
    let mut e = rng.random_range(-1.0..2.0);
    for _ in 0..j {
        levels.push(e);
        e += rng.random_range(0.05..1.0);
    }
    let beta = rng.random_range(0.3..3.0);
    let mu = levels[0] - rng.random_range(0.02..1.5);
    (levels, beta, mu)
}

/// Moment-matched occupations `1 / (exp(beta (eps - mu)) - 1)`, evaluated directly.
pub fn bose_factors(levels: &[f64], beta: f64, mu: f64) -> Vec<f64> {
    levels
        .iter()
        .map(|e| 1.0 / ((beta * (e - mu)).exp() - 1.0))
        .collect()
}

/// Classical Kullback-Leibler divergence of two probability vectors.
pub fn classical_kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a * (a / b).ln())
        .sum()
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
