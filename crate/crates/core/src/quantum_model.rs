//! Quantum exponential families `rho_theta = exp(-theta^k H_k) / Z(theta)`,
//! projection of a state onto the family, the two Pythagorean decompositions
//! and the conditional (diagonal) manifold.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::density_core::{
    diag_conditional, relative_entropy, trace_product, Basis, CMatrix, DensityMatrix,
    HermitianOperator, EIGEN_THRESHOLD,
};
use crate::{Error, Result};

/// Models whose `{I, H_1, .., H_n}` Gram matrix is worse conditioned than
/// this are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Family generated by linearly independent Hermitian operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialFamilyModel {
    generators: Vec<HermitianOperator>,
    gram_condition: f64,
}

impl ExponentialFamilyModel {
    pub fn new(generators: Vec<HermitianOperator>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidArgument(
                "model needs at least one generator".into(),
            ));
        };
        let d = first.dim();
        for g in &generators {
            if g.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: g.dim(),
                });
            }
        }
        // Gram matrix of {I, H_1, .., H_n} under (A, B) -> Re tr(A B)
        let mut basis: Vec<&CMatrix> = Vec::with_capacity(generators.len() + 1);
        let identity = CMatrix::identity(d, d);
        basis.push(&identity);
        basis.extend(generators.iter().map(HermitianOperator::matrix));
        let m = basis.len();
        let gram = DMatrix::from_fn(m, m, |i, j| trace_product(basis[i], basis[j]).re);
        let eig = SymmetricEigen::new(gram).eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        let gram_condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(gram_condition <= MAX_GRAM_CONDITION) {
            return Err(Error::IllConditionedModel(gram_condition));
        }
        Ok(Self {
            generators,
            gram_condition,
        })
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn num_parameters(&self) -> usize {
        self.generators.len()
    }

    pub fn gram_condition(&self) -> f64 {
        self.gram_condition
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.num_parameters() {
            return Err(Error::LengthMismatch {
                expected: self.num_parameters(),
                got: theta.len(),
            });
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument(
                "theta entries must be finite".into(),
            ));
        }
        Ok(())
    }

    /// `theta^k H_k`.
    pub fn hamiltonian(&self, theta: &[f64]) -> Result<HermitianOperator> {
        self.check_theta(theta)?;
        let d = self.dim();
        let mut k = CMatrix::zeros(d, d);
        for (t, g) in theta.iter().zip(&self.generators) {
            k += g.matrix().scale(*t);
        }
        HermitianOperator::new(k)
    }

    fn gibbs(&self, theta: &[f64]) -> Result<Gibbs> {
        let (energies, vectors) = self.hamiltonian(theta)?.eigen();
        let shift = energies.min();
        let weights = energies.map(|e| (-(e - shift)).exp());
        let total: f64 = weights.sum();
        let log_z = total.ln() - shift;
        let probabilities = weights.unscale(total);
        Ok(Gibbs {
            energies,
            log_z,
            state: DensityMatrix::from_spectrum(probabilities, vectors),
        })
    }

    /// `rho_theta = exp(-theta^k H_k) / Z(theta)`, full rank for finite theta.
    pub fn state_at(&self, theta: &[f64]) -> Result<DensityMatrix> {
        Ok(self.gibbs(theta)?.state)
    }

    /// `ln Z(theta) = ln tr exp(-theta^k H_k)`.
    pub fn log_partition(&self, theta: &[f64]) -> Result<f64> {
        Ok(self.gibbs(theta)?.log_z)
    }

    /// `tr(rho H_k)` for every generator.
    pub fn moments(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rho.dim(),
            });
        }
        Ok(self.generators.iter().map(|g| g.expectation(rho)).collect())
    }

    /// Hessian of `ln Z` at `theta` (the Kubo-Mori covariance of the generators).
    ///
    /// In the eigenbasis of `theta^k H_k` with populations `p_m`,
    /// `d^2 ln Z / d theta_a d theta_b = sum_{m,n} L(p_m, p_n) A_mn B_nm`
    /// where `A`, `B` are the centred generators and `L` is the logarithmic
    /// mean `(p_m - p_n) / (ln p_m - ln p_n)`, with `L(p, p) = p`.
    pub fn log_partition_hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        let gibbs = self.gibbs(theta)?;
        Ok(self.kubo_mori(&gibbs))
    }

    fn kubo_mori(&self, gibbs: &Gibbs) -> DMatrix<f64> {
        let d = self.dim();
        let p = gibbs.state.eigenvalues();
        let u = gibbs.state.eigenvectors();
        let e = &gibbs.energies;
        let mut weight = DMatrix::<f64>::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                // ln p_m - ln p_n = e_n - e_m, taken from the energies directly
                let delta = (e[n] - e[m]).abs();
                let larger = p[m].max(p[n]);
                weight[(m, n)] = if delta < 1e-12 {
                    0.5 * (p[m] + p[n])
                } else {
                    larger * -(-delta).exp_m1() / delta
                };
            }
        }
        let centred: Vec<CMatrix> = self
            .generators
            .iter()
            .map(|g| {
                let mean = g.expectation(&gibbs.state);
                let local = u.adjoint() * g.matrix() * u;
                local - CMatrix::identity(d, d).scale(mean)
            })
            .collect();
        let k = self.generators.len();
        let mut hess = DMatrix::<f64>::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let mut acc = 0.0;
                for m in 0..d {
                    for n in 0..d {
                        acc += weight[(m, n)] * (centred[a][(m, n)] * centred[b][(n, m)]).re;
                    }
                }
                hess[(a, b)] = acc;
                hess[(b, a)] = acc;
            }
        }
        hess
    }
}

struct Gibbs {
    energies: DVector<f64>,
    log_z: f64,
    state: DensityMatrix,
}

/// `D(sigma || rho_theta) = tr sigma ln sigma + theta^k tr(sigma H_k) + ln Z(theta)`.
pub fn model_divergence(
    sigma: &DensityMatrix,
    model: &ExponentialFamilyModel,
    theta: &[f64],
) -> Result<f64> {
    let moments = model.moments(sigma)?;
    let log_z = model.log_partition(theta)?;
    let linear: f64 = theta.iter().zip(&moments).map(|(t, m)| t * m).sum();
    Ok(-sigma.von_neumann_entropy() + linear + log_z)
}

/// Gradient of `theta -> D(sigma || rho_theta)`: `tr(sigma H_k) - tr(rho_theta H_k)`.
pub fn model_divergence_gradient(
    sigma: &DensityMatrix,
    model: &ExponentialFamilyModel,
    theta: &[f64],
) -> Result<Vec<f64>> {
    let target = model.moments(sigma)?;
    let rho = model.state_at(theta)?;
    let current = model.moments(&rho)?;
    Ok(target.iter().zip(&current).map(|(s, r)| s - r).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectOptions {
    /// Bound on the Euclidean norm of the moment mismatch.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    pub theta_hat: Vec<f64>,
    pub rho_hat: DensityMatrix,
    /// `D(sigma || rho_hat)`.
    pub divergence: f64,
    /// Largest `|tr(rho_hat H_k) - tr(sigma H_k)|`.
    pub moment_residual: f64,
    /// Pythagorean residual against the reference point `theta = 0`.
    pub pythagoras_residual: f64,
    pub iterations: usize,
}

fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    h.clone().cholesky().map(|c| c.solve(g))
}

/// Projects `sigma` onto the family by minimizing `D(sigma || rho_theta)`.
///
/// Newton iteration on the convex map `theta -> ln Z(theta) + theta^k tr(sigma H_k)`
/// with the exact Kubo-Mori Hessian and a backtracking line search. A state
/// whose moments lie on the boundary of the attainable set (e.g. a pure state
/// with an extremal moment) drives `theta` off to infinity; the solver stops
/// at the first iterate inside the tolerance, or reports
/// [`Error::NoConvergence`] when the iteration cap comes first.
pub fn project(
    sigma: &DensityMatrix,
    model: &ExponentialFamilyModel,
    options: &ProjectOptions,
) -> Result<ProjectionReport> {
    if !(options.tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let target = DVector::from_vec(model.moments(sigma)?);
    let k = model.num_parameters();
    let objective =
        |theta: &DVector<f64>, gibbs: &Gibbs| -> f64 { gibbs.log_z + theta.dot(&target) };

    let mut theta = DVector::<f64>::zeros(k);
    let mut gibbs = model.gibbs(theta.as_slice())?;
    let mut value = objective(&theta, &gibbs);
    let mut iterations = 0;
    loop {
        let current = DVector::from_vec(model.moments(&gibbs.state)?);
        let grad = &target - &current;
        let gnorm = grad.norm();
        if gnorm <= options.tolerance {
            break;
        }
        if iterations >= options.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        }
        iterations += 1;

        let hess = model.kubo_mori(&gibbs);
        let dir = match solve_spd(&hess, &grad) {
            Some(step) if step.dot(&grad) > 0.0 => -step,
            _ => -grad.clone(),
        };
        let slope = dir.dot(&grad);
        let mut step = 1.0;
        let accepted = loop {
            let trial = &theta + dir.scale(step);
            let trial_gibbs = model.gibbs(trial.as_slice())?;
            let trial_value = objective(&trial, &trial_gibbs);
            if trial_value <= value + 1e-4 * step * slope {
                break Some((trial, trial_gibbs, trial_value));
            }
            if trial_value <= value + 8.0 * f64::EPSILON * value.abs().max(1.0) {
                let g = &target - DVector::from_vec(model.moments(&trial_gibbs.state)?);
                if g.norm() < gnorm {
                    break Some((trial, trial_gibbs, trial_value));
                }
            }
            step *= 0.5;
            if step < 1e-16 {
                break None;
            }
        };
        let Some((next, next_gibbs, next_value)) = accepted else {
            return Err(Error::NoConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        };
        theta = next;
        gibbs = next_gibbs;
        value = next_value;
    }

    let rho_hat = gibbs.state;
    let moment_residual = model
        .moments(&rho_hat)?
        .iter()
        .zip(target.iter())
        .map(|(r, s)| (r - s).abs())
        .fold(0.0, f64::max);
    let divergence = relative_entropy(sigma, &rho_hat)?;
    let theta_hat = theta.as_slice().to_vec();
    let reference = vec![0.0; k];
    let check = pythagoras_at(sigma, &rho_hat, model, &reference)?;
    Ok(ProjectionReport {
        theta_hat,
        rho_hat,
        divergence,
        moment_residual,
        pythagoras_residual: check.residual,
        iterations,
    })
}

/// Both sides of a Pythagorean decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PythagorasCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl PythagorasCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        }
    }
}

fn pythagoras_at(
    sigma: &DensityMatrix,
    rho_hat: &DensityMatrix,
    model: &ExponentialFamilyModel,
    theta: &[f64],
) -> Result<PythagorasCheck> {
    let rho_theta = model.state_at(theta)?;
    let lhs = relative_entropy(sigma, &rho_theta)?;
    let rhs = relative_entropy(sigma, rho_hat)? + relative_entropy(rho_hat, &rho_theta)?;
    Ok(PythagorasCheck::new(lhs, rhs))
}

/// `D(sigma || rho_theta)` against `D(sigma || rho_sigma) + D(rho_sigma || rho_theta)`
/// where `rho_sigma` is the projection of `sigma` onto the model.
pub fn pythagoras_model(
    sigma: &DensityMatrix,
    model: &ExponentialFamilyModel,
    theta: &[f64],
) -> Result<PythagorasCheck> {
    let report = project(sigma, model, &ProjectOptions::default())?;
    pythagoras_at(sigma, &report.rho_hat, model, theta)
}

/// Same as [`pythagoras_model`] but reusing an existing projection.
pub fn pythagoras_model_with(
    sigma: &DensityMatrix,
    report: &ProjectionReport,
    model: &ExponentialFamilyModel,
    theta: &[f64],
) -> Result<PythagorasCheck> {
    pythagoras_at(sigma, &report.rho_hat, model, theta)
}

/// Off-diagonal tolerance for treating `rho` as diagonal in the basis.
pub const DIAGONAL_TOLERANCE: f64 = 1e-10;

/// `D(sigma || rho)` against `D(sigma || sigma_c) + D(sigma_c || rho)` with
/// `sigma_c = diag(sigma)`. Only valid for `rho` diagonal in `basis`.
pub fn pythagoras_conditional(
    sigma: &DensityMatrix,
    rho: &DensityMatrix,
    basis: &Basis,
) -> Result<PythagorasCheck> {
    if rho.dim() != basis.dim() || sigma.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: if rho.dim() != basis.dim() {
                rho.dim()
            } else {
                sigma.dim()
            },
        });
    }
    let off = basis.off_diagonal_norm(rho.matrix());
    if off > DIAGONAL_TOLERANCE {
        return Err(Error::NotDiagonal(off));
    }
    let sigma_c = sigma.conditioned(basis)?;
    let lhs = relative_entropy(sigma, rho)?;
    let rhs = relative_entropy(sigma, &sigma_c)? + relative_entropy(&sigma_c, rho)?;
    Ok(PythagorasCheck::new(lhs, rhs))
}

/// `rho_c = diag(rho_theta)`, a point of the conditional manifold.
pub fn conditional_manifold_point(
    model: &ExponentialFamilyModel,
    theta: &[f64],
    basis: &Basis,
) -> Result<DensityMatrix> {
    let rho = model.state_at(theta)?;
    DensityMatrix::new(diag_conditional(rho.matrix(), basis)?)
}

/// The two objectives on the conditional manifold at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalObjectives {
    /// `D(sigma_c || rho_c)`.
    pub conditioned: f64,
    /// `D(sigma || rho_c)`.
    pub full: f64,
    /// `D(sigma || sigma_c)`; `full - conditioned` should equal it for every theta.
    pub offset: f64,
}

pub fn conditional_objectives(
    sigma: &DensityMatrix,
    model: &ExponentialFamilyModel,
    theta: &[f64],
    basis: &Basis,
) -> Result<ConditionalObjectives> {
    let rho_c = conditional_manifold_point(model, theta, basis)?;
    let sigma_c = sigma.conditioned(basis)?;
    Ok(ConditionalObjectives {
        conditioned: relative_entropy(&sigma_c, &rho_c)?,
        full: relative_entropy(sigma, &rho_c)?,
        offset: relative_entropy(sigma, &sigma_c)?,
    })
}

/// `t -> diag(t, (1 - t)/(d - 1), .., (1 - t)/(d - 1))`, which reaches the
/// border of the positive cone at `t = 0`.
pub fn canonical_border_path(dim: usize) -> impl Fn(f64) -> Result<DensityMatrix> {
    move |t: f64| {
        if dim < 2 {
            return Err(Error::InvalidArgument(
                "border path needs dimension >= 2".into(),
            ));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "path parameter {t} outside [0, 1]"
            )));
        }
        let rest = (1.0 - t) / (dim - 1) as f64;
        let mut p = vec![rest; dim];
        p[0] = t;
        DensityMatrix::diagonal(&p)
    }
}

/// `D(sigma || path(t))` along a family of diagonal states approaching the
/// border. `t_values` must be strictly decreasing; at a `t` where the path
/// loses part of the support of `sigma` the divergence is infinite and the
/// probe fails with [`Error::SupportViolation`].
pub fn border_probe<F>(sigma: &DensityMatrix, path: F, t_values: &[f64]) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    if t_values.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidArgument(
            "t values must be strictly decreasing".into(),
        ));
    }
    t_values
        .iter()
        .map(|&t| {
            let rho = path(t)?;
            Ok((t, relative_entropy(sigma, &rho)?))
        })
        .collect()
}

/// Diagonal weight `(sigma_c)_ii` in `basis`, zero below the eigenvalue
/// threshold. A positive weight on an entry that a border path drives to
/// zero makes the divergence blow up like `-weight * ln t`.
pub fn conditioned_weight(sigma: &DensityMatrix, basis: &Basis, index: usize) -> Result<f64> {
    let c = basis.coordinates(sigma.matrix());
    if index >= c.nrows() {
        return Err(Error::InvalidArgument(format!(
            "index {index} out of range"
        )));
    }
    let w = c[(index, index)].re;
    Ok(if w <= EIGEN_THRESHOLD { 0.0 } else { w })
}
