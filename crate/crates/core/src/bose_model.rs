//! Grand-canonical model of the ideal Bose gas and its divergence fit.
//!
//! Data are occupation numbers `n_j` of a finite list of known levels
//! `eps_j`. The model is the product of geometric distributions
//!
//! ```text
//! p(n) = exp(-beta * sum_j eps_j n_j + beta * mu * sum_j n_j) / Z(beta, mu)
//! Z(beta, mu) = prod_j 1 / (1 - exp(-beta (eps_j - mu)))
//! ```
//!
//! and a data sequence is compared with a model point through
//! `D(n || beta, mu) = ln Z + beta * sum_j n_j (eps_j - mu)`, which is linear
//! in `n`. The fit minimizes `D` and therefore solves the two moment equations
//! `sum n_j eps_j = sum eps_j f_j` and `sum n_j = sum f_j` with
//! `f_j = 1 / (exp(beta (eps_j - mu)) - 1)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::bose_geometry;
use crate::{Error, Result};

/// Strictly increasing, finite list of level energies.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<f64>,
}

impl EnergySpectrum {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument(
                "spectrum needs at least one level".into(),
            ));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument(
                "spectrum levels must be finite".into(),
            ));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "spectrum must be strictly increasing".into(),
            ));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Lowest level `eps_1`; the chemical potential must stay below it.
    pub fn ground(&self) -> f64 {
        self.levels[0]
    }
}

/// Non-negative occupation data. Integrality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSequence {
    counts: Vec<f64>,
}

impl OccupationSequence {
    pub fn new(counts: Vec<f64>) -> Result<Self> {
        if let Some(bad) = counts.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "occupations must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self { counts })
    }

    pub fn from_counts<I: IntoIterator<Item = u64>>(counts: I) -> Self {
        Self {
            counts: counts.into_iter().map(|c| c as f64).collect(),
        }
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    fn check_len(&self, spectrum: &EnergySpectrum) -> Result<()> {
        if self.len() != spectrum.len() {
            return Err(Error::LengthMismatch {
                expected: spectrum.len(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// Inverse temperature and chemical potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoseModelPoint {
    pub beta: f64,
    pub mu: f64,
}

impl BoseModelPoint {
    /// Checks `beta > 0` and finiteness. The bound `mu < eps_1` depends on the
    /// spectrum and is checked by [`BoseModelPoint::validate`].
    pub fn new(beta: f64, mu: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if !mu.is_finite() {
            return Err(Error::Domain(format!("mu must be finite, got {mu}")));
        }
        Ok(Self { beta, mu })
    }

    pub fn validate(&self, spectrum: &EnergySpectrum) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Domain(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if !(self.mu.is_finite() && self.mu < spectrum.ground()) {
            return Err(Error::Domain(format!(
                "mu = {} must lie below the ground level {}",
                self.mu,
                spectrum.ground()
            )));
        }
        Ok(())
    }

    /// Reduced gaps `beta (eps_j - mu)`, all strictly positive on a valid point.
    fn gaps(&self, spectrum: &EnergySpectrum) -> Result<Vec<f64>> {
        self.validate(spectrum)?;
        Ok(spectrum
            .levels()
            .iter()
            .map(|e| self.beta * (e - self.mu))
            .collect())
    }
}

/// Mean occupation `1 / (e^x - 1)` at reduced gap `x > 0`.
#[inline]
fn bose_factor(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// `ln Z(beta, mu) = -sum_j ln(1 - exp(-beta (eps_j - mu)))`.
pub fn log_partition(spectrum: &EnergySpectrum, point: &BoseModelPoint) -> Result<f64> {
    let gaps = point.gaps(spectrum)?;
    Ok(gaps.iter().map(|&x| -(-(-x).exp_m1()).ln()).sum())
}

/// Mean occupations `f_j = 1 / (exp(beta (eps_j - mu)) - 1)`.
pub fn occupation(spectrum: &EnergySpectrum, point: &BoseModelPoint) -> Result<Vec<f64>> {
    Ok(point.gaps(spectrum)?.into_iter().map(bose_factor).collect())
}

/// `D(n || beta, mu) = ln Z(beta, mu) - sum_j n_j (-beta eps_j + beta mu)`.
pub fn divergence(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<f64> {
    n.check_len(spectrum)?;
    let log_z = log_partition(spectrum, point)?;
    let linear: f64 = n
        .counts()
        .iter()
        .zip(spectrum.levels())
        .map(|(nj, e)| nj * (-point.beta * e + point.beta * point.mu))
        .sum();
    Ok(log_z - linear)
}

/// Log-probability of `n` under the product-geometric model.
pub fn log_pmf(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<f64> {
    n.check_len(spectrum)?;
    let log_z = log_partition(spectrum, point)?;
    let energy: f64 = n
        .counts()
        .iter()
        .zip(spectrum.levels())
        .map(|(nj, e)| e * nj)
        .sum();
    Ok(-log_z - point.beta * energy + point.beta * point.mu * n.total())
}

/// Gradient of the divergence in `(beta, mu)`.
pub fn divergence_gradient(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<[f64; 2]> {
    n.check_len(spectrum)?;
    let f = occupation(spectrum, point)?;
    let mut d_beta = 0.0;
    let mut excess = 0.0;
    for ((nj, fj), e) in n.counts().iter().zip(&f).zip(spectrum.levels()) {
        d_beta += (nj - fj) * (e - point.mu);
        excess += nj - fj;
    }
    Ok([d_beta, -point.beta * excess])
}

/// Coordinate Hessian of the divergence in `(beta, mu)`.
///
/// The `n`-dependence sits only in the mixed entry, as `-sum_j (n_j - f_j)`.
pub fn divergence_hessian(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<[[f64; 2]; 2]> {
    n.check_len(spectrum)?;
    let mut h = bose_geometry::metric(spectrum, point)?.entries();
    let f = occupation(spectrum, point)?;
    let excess: f64 = n.counts().iter().zip(&f).map(|(nj, fj)| nj - fj).sum();
    h[0][1] -= excess;
    h[1][0] -= excess;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Bound on the Euclidean norm of the gradient in `(ln beta, ln(eps_1 - mu))`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoseFitReport {
    pub point: BoseModelPoint,
    pub divergence_at_min: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub metric: [[f64; 2]; 2],
}

impl BoseFitReport {
    /// Asymptotic standard errors of `(beta, mu)` when the fitted data are the
    /// average of `shots` independent draws: `sqrt(diag(g^-1) / shots)`.
    pub fn standard_errors(&self, shots: f64) -> [f64; 2] {
        let [[a, b], [_, d]] = self.metric;
        let det = a * d - b * b;
        [(d / det / shots).sqrt(), (a / det / shots).sqrt()]
    }
}

// Coordinates where the open domain beta > 0, mu < eps_1 becomes the plane.
#[derive(Debug, Clone, Copy)]
struct Unconstrained {
    x: f64,
    y: f64,
}

impl Unconstrained {
    fn from_point(point: &BoseModelPoint, ground: f64) -> Self {
        Self {
            x: point.beta.ln(),
            y: (ground - point.mu).ln(),
        }
    }

    fn to_point(self, ground: f64) -> BoseModelPoint {
        BoseModelPoint {
            beta: self.x.exp(),
            mu: ground - self.y.exp(),
        }
    }
}

// Far enough out that the fitted point would sit on the boundary of the domain.
const COORDINATE_LIMIT: f64 = 60.0;

struct Objective<'a> {
    n: &'a OccupationSequence,
    spectrum: &'a EnergySpectrum,
}

impl Objective<'_> {
    /// Inside the coordinate box, and far enough from `eps_1` that `mu`
    /// still rounds to a value below it.
    fn admissible(&self, u: Unconstrained) -> bool {
        u.x.abs() < COORDINATE_LIMIT
            && u.y.abs() < COORDINATE_LIMIT
            && u.to_point(self.spectrum.ground())
                .validate(self.spectrum)
                .is_ok()
    }

    fn value(&self, u: Unconstrained) -> Result<f64> {
        divergence(self.n, self.spectrum, &u.to_point(self.spectrum.ground()))
    }

    /// Gradient and Hessian in the unconstrained coordinates.
    fn derivatives(&self, u: Unconstrained) -> Result<([f64; 2], [[f64; 2]; 2])> {
        let p = u.to_point(self.spectrum.ground());
        let g = divergence_gradient(self.n, self.spectrum, &p)?;
        let h = divergence_hessian(self.n, self.spectrum, &p)?;
        // beta = e^x, mu = eps_1 - e^y
        let db = p.beta;
        let dm = -u.y.exp();
        let grad = [g[0] * db, g[1] * dm];
        let hess = [
            [h[0][0] * db * db + g[0] * db, h[0][1] * db * dm],
            [h[1][0] * db * dm, h[1][1] * dm * dm + g[1] * dm],
        ];
        Ok((grad, hess))
    }
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Newton direction for a 2x2 system, shifted towards steepest descent until
/// the (possibly indefinite) Hessian becomes positive definite.
fn descent_direction(grad: [f64; 2], hess: [[f64; 2]; 2]) -> [f64; 2] {
    let scale = hess[0][0].abs().max(hess[1][1].abs()).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..60 {
        let a = hess[0][0] + shift;
        let d = hess[1][1] + shift;
        let b = 0.5 * (hess[0][1] + hess[1][0]);
        let det = a * d - b * b;
        if a > 0.0 && det > 1e-14 * a * d {
            let dir = [
                -(d * grad[0] - b * grad[1]) / det,
                -(a * grad[1] - b * grad[0]) / det,
            ];
            if dir[0] * grad[0] + dir[1] * grad[1] < 0.0 {
                return dir;
            }
        }
        shift = if shift == 0.0 {
            1e-6 * scale
        } else {
            shift * 10.0
        };
    }
    [-grad[0] / scale, -grad[1] / scale]
}

/// Starting point: `mu_0 = eps_1 - (eps_2 - eps_1)`, then `beta_0` matching
/// the total occupation at that `mu_0`. The total is decreasing in beta, so a
/// bisection in `ln beta` is enough.
fn initial_point(spectrum: &EnergySpectrum, total: f64) -> BoseModelPoint {
    let levels = spectrum.levels();
    let mu = levels[0] - (levels[1] - levels[0]);
    let total_at = |ln_beta: f64| -> f64 {
        let beta = ln_beta.exp();
        levels.iter().map(|e| bose_factor(beta * (e - mu))).sum()
    };
    let (mut lo, mut hi) = (-COORDINATE_LIMIT, COORDINATE_LIMIT);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total_at(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    BoseModelPoint {
        beta: (0.5 * (lo + hi)).exp(),
        mu,
    }
}

/// Fits `(beta, mu)` by minimizing the divergence.
///
/// Damped Newton iteration in `x = ln beta`, `y = ln(eps_1 - mu)`. Converged
/// when the gradient norm in those coordinates drops below
/// `options.tolerance`.
pub fn fit(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    options: &FitOptions,
) -> Result<BoseFitReport> {
    n.check_len(spectrum)?;
    if spectrum.len() < 2 {
        return Err(Error::Unidentifiable(
            "a single level makes the two moment equations proportional".into(),
        ));
    }
    if !(options.tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let total = n.total();
    if total <= 0.0 {
        return Err(Error::NoInteriorMinimum(
            "all occupations vanish; the infimum lies at beta -> infinity".into(),
        ));
    }
    // Mean occupations decrease along the spectrum for every interior point,
    // so the occupation-weighted mean energy sits strictly between eps_1 and
    // the plain mean of the levels.
    let levels = spectrum.levels();
    let mean_energy = n
        .counts()
        .iter()
        .zip(levels)
        .map(|(c, e)| c * e)
        .sum::<f64>()
        / total;
    let plain_mean = levels.iter().sum::<f64>() / levels.len() as f64;
    if mean_energy <= levels[0] || mean_energy >= plain_mean {
        return Err(Error::NoInteriorMinimum(format!(
            "occupation-weighted energy {mean_energy} outside ({}, {plain_mean})",
            levels[0]
        )));
    }

    let ground = spectrum.ground();
    let objective = Objective { n, spectrum };
    let mut u = Unconstrained::from_point(&initial_point(spectrum, total), ground);
    let mut value = objective.value(u)?;
    let (mut grad, mut hess) = objective.derivatives(u)?;
    let mut gnorm = norm2(grad);
    let mut iterations = 0;

    while gnorm > options.tolerance {
        if iterations >= options.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        }
        iterations += 1;

        let dir = descent_direction(grad, hess);
        let slope = dir[0] * grad[0] + dir[1] * grad[1];
        let mut step = 1.0;
        let accepted = loop {
            let trial = Unconstrained {
                x: u.x + step * dir[0],
                y: u.y + step * dir[1],
            };
            if objective.admissible(trial) {
                let trial_value = objective.value(trial)?;
                if trial_value <= value + 1e-4 * step * slope {
                    break Some((trial, trial_value));
                }
                // Near the minimum the decrease is below rounding of the
                // objective; fall back on the gradient norm.
                if trial_value <= value + 8.0 * f64::EPSILON * value.abs() {
                    let (g, _) = objective.derivatives(trial)?;
                    if norm2(g) < gnorm {
                        break Some((trial, trial_value));
                    }
                }
            }
            step *= 0.5;
            if step < 1e-16 {
                break None;
            }
        };
        let Some((next, next_value)) = accepted else {
            if u.x.abs() > 0.9 * COORDINATE_LIMIT || u.y.abs() > 0.9 * COORDINATE_LIMIT {
                return Err(Error::NoInteriorMinimum(
                    "iterates ran off to the boundary of the domain".into(),
                ));
            }
            return Err(Error::NoConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        };
        u = next;
        value = next_value;
        (grad, hess) = objective.derivatives(u)?;
        gnorm = norm2(grad);
    }

    let point = u.to_point(ground);
    Ok(BoseFitReport {
        point,
        divergence_at_min: value,
        iterations,
        gradient_norm: gnorm,
        metric: bose_geometry::metric(spectrum, &point)?.entries(),
    })
}

fn geometric_per_level(
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<Vec<Geometric>> {
    point
        .gaps(spectrum)?
        .into_iter()
        .map(|x| {
            // success probability 1 - exp(-x)
            Geometric::new(-(-x).exp_m1())
                .map_err(|e| Error::Domain(format!("geometric parameter: {e}")))
        })
        .collect()
}

/// One draw of the occupations: each `n_j` independently geometric with
/// success probability `1 - exp(-beta (eps_j - mu))`.
pub fn sample_occupations(
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
    seed: u64,
) -> Result<OccupationSequence> {
    let dists = geometric_per_level(spectrum, point)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(OccupationSequence::from_counts(
        dists.iter().map(|d| d.sample(&mut rng)),
    ))
}

/// Average of `shots` independent draws.
pub fn sample_mean_occupations(
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
    shots: usize,
    seed: u64,
) -> Result<OccupationSequence> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let dists = geometric_per_level(spectrum, point)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![0.0; dists.len()];
    for _ in 0..shots {
        for (s, d) in sums.iter_mut().zip(&dists) {
            *s += d.sample(&mut rng) as f64;
        }
    }
    OccupationSequence::new(sums.into_iter().map(|s| s / shots as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(levels: &[f64]) -> EnergySpectrum {
        EnergySpectrum::new(levels.to_vec()).unwrap()
    }

    fn pt(beta: f64, mu: f64) -> BoseModelPoint {
        BoseModelPoint::new(beta, mu).unwrap()
    }

    #[test]
    fn log_partition_single_level() {
        let v = log_partition(&spec(&[1.0]), &pt(1.0, 0.0)).unwrap();
        let expected = -(1.0 - (-1.0f64).exp()).ln();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.458675).abs() < 1e-6);
    }

    #[test]
    fn log_partition_decays_with_beta() {
        let s = spec(&[0.5, 1.0, 4.0]);
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let beta = 0.25 * 1.5f64.powi(k);
            let v = log_partition(&s, &pt(beta, 0.0)).unwrap();
            assert!(v >= 0.0 && (v < prev || v == 0.0));
            prev = v;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn mu_at_ground_level_is_rejected() {
        let err = log_partition(&spec(&[1.0, 2.0]), &pt(1.0, 1.0)).unwrap_err();
        assert_eq!(err.kind(), "DomainError");
        assert!(BoseModelPoint::new(0.0, 0.0).is_err());
        assert!(BoseModelPoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn spectrum_must_increase() {
        assert!(EnergySpectrum::new(vec![1.0, 1.0]).is_err());
        assert!(EnergySpectrum::new(vec![2.0, 1.0]).is_err());
        assert!(EnergySpectrum::new(vec![]).is_err());
        assert!(OccupationSequence::new(vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn occupation_values() {
        let f = occupation(&spec(&[2.0f64.ln()]), &pt(1.0, 0.0)).unwrap();
        assert!((f[0] - 1.0).abs() < 1e-15);

        let f = occupation(&spec(&[1.0, 2.0]), &pt(1.0, 0.0)).unwrap();
        assert!((f[0] - 0.581977).abs() < 1e-6);
        assert!((f[1] - 0.156518).abs() < 1e-6);

        let f = occupation(&spec(&[1.0]), &pt(800.0, 0.0)).unwrap();
        assert_eq!(f[0], 0.0);
    }

    #[test]
    fn divergence_of_empty_data_is_log_partition() {
        let s = spec(&[0.3, 1.1, 2.0]);
        let p = pt(0.7, -0.2);
        let n = OccupationSequence::new(vec![0.0; 3]).unwrap();
        assert_eq!(
            divergence(&n, &s, &p).unwrap(),
            log_partition(&s, &p).unwrap()
        );
    }

    #[test]
    fn divergence_at_matched_data_is_bose_entropy() {
        let s = spec(&[1.0, 2.0]);
        let p = pt(1.0, 0.0);
        let f = occupation(&s, &p).unwrap();
        let n = OccupationSequence::new(f.clone()).unwrap();
        let entropy: f64 = f
            .iter()
            .map(|fj| (1.0 + fj) * (1.0 + fj).ln() - fj * fj.ln())
            .sum();
        assert!((divergence(&n, &s, &p).unwrap() - entropy).abs() < 1e-13);
    }

    #[test]
    fn geometric_log_pmf() {
        let s = spec(&[2.0f64.ln()]);
        let p = pt(1.0, 0.0);
        for k in 0..6u64 {
            let n = OccupationSequence::from_counts([k]);
            let v = log_pmf(&n, &s, &p).unwrap();
            assert!((v - (k as f64 + 1.0) * -(2.0f64.ln())).abs() < 1e-13);
        }
    }

    #[test]
    fn length_mismatch() {
        let n = OccupationSequence::new(vec![1.0]).unwrap();
        let err = divergence(&n, &spec(&[1.0, 2.0]), &pt(1.0, 0.0)).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn fit_recovers_generating_point() {
        let s = spec(&[0.5, 1.25, 2.0, 3.5]);
        let truth = pt(1.7, 0.1);
        let n = OccupationSequence::new(occupation(&s, &truth).unwrap()).unwrap();
        let r = fit(&n, &s, &FitOptions::default()).unwrap();
        assert!((r.point.beta / truth.beta - 1.0).abs() < 1e-8);
        assert!((r.point.mu / truth.mu - 1.0).abs() < 1e-8);
        assert!(r.gradient_norm <= 1e-10);
    }

    #[test]
    fn fit_degenerate_inputs() {
        let e = fit(
            &OccupationSequence::new(vec![5.0]).unwrap(),
            &spec(&[1.0]),
            &FitOptions::default(),
        )
        .unwrap_err();
        assert_eq!(e.kind(), "Unidentifiable");

        let e = fit(
            &OccupationSequence::new(vec![0.0, 0.0, 0.0]).unwrap(),
            &spec(&[1.0, 2.0, 3.0]),
            &FitOptions::default(),
        )
        .unwrap_err();
        assert_eq!(e.kind(), "NoInteriorMinimum");

        // all data in the ground level
        let e = fit(
            &OccupationSequence::new(vec![4.0, 0.0, 0.0]).unwrap(),
            &spec(&[1.0, 2.0, 3.0]),
            &FitOptions::default(),
        )
        .unwrap_err();
        assert_eq!(e.kind(), "NoInteriorMinimum");

        // increasing occupations cannot come from beta > 0
        let e = fit(
            &OccupationSequence::new(vec![0.0, 1.0, 3.0]).unwrap(),
            &spec(&[1.0, 2.0, 3.0]),
            &FitOptions::default(),
        )
        .unwrap_err();
        assert_eq!(e.kind(), "NoInteriorMinimum");
    }

    #[test]
    fn sampler_is_deterministic() {
        let s = spec(&[0.1, 0.4, 0.9]);
        let p = pt(2.0, -0.3);
        let a = sample_occupations(&s, &p, 42).unwrap();
        let b = sample_occupations(&s, &p, 42).unwrap();
        assert_eq!(a, b);
        let zeros = sample_occupations(&s, &pt(1e4, -0.3), 7).unwrap();
        assert_eq!(zeros.total(), 0.0);
    }
}
