//! Dense finite-dimensional density matrices, quantum relative entropy and the
//! diagonal conditional expectation.
//!
//! Every [`DensityMatrix`] carries its eigendecomposition, computed once at
//! construction. Eigenvalues in `(-1e-12, 1e-12]` are treated as zero; the
//! support of a state is the span of eigenvectors above that threshold.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigenvalues at or below this are zero.
pub const EIGEN_THRESHOLD: f64 = 1e-12;
/// Entrywise tolerance on `A - A^dagger`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Allowed `|tr - 1|` for a density matrix.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Frobenius bound on `(I - P_rho) P_sigma` for support containment.
pub const SUPPORT_TOLERANCE: f64 = 1e-8;
/// Entrywise bound on `U^dagger U - I` for a basis.
pub const BASIS_TOLERANCE: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    Ok(m.nrows())
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues ascending with matching eigenvector columns.
fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vectors)
}

/// `sum_k f(lambda_k) v_k v_k^dagger`.
fn spectral_sum(values: &DVector<f64>, vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, k| {
        vectors[(i, k)] * f(values[k])
    });
    scaled * vectors.adjoint()
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Self-adjoint operator on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if !(dev <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self {
            matrix: symmetrize(&matrix),
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_iterator(
            diag.len(),
            diag.iter().map(|&x| c(x)),
        )))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues ascending and eigenvectors as columns.
    pub fn eigen(&self) -> (DVector<f64>, CMatrix) {
        hermitian_eigen(&self.matrix)
    }

    /// `tr(rho H)`, real for Hermitian `H`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        trace_product(rho.matrix(), &self.matrix).re
    }

    pub fn operator_norm(&self) -> f64 {
        let (values, _) = self.eigen();
        values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `a A + b B`.
    pub fn linear_combination(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        check_dims(x.dim(), y.dim())?;
        Ok(Self {
            matrix: x.matrix.scale(a) + y.matrix.scale(b),
        })
    }
}

pub fn pauli_x() -> HermitianOperator {
    HermitianOperator {
        matrix: CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
    }
}

pub fn pauli_y() -> HermitianOperator {
    let i = C64::new(0.0, 1.0);
    HermitianOperator {
        matrix: CMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
    }
}

pub fn pauli_z() -> HermitianOperator {
    HermitianOperator {
        matrix: CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let dev = hermitian_deviation(&matrix);
        if !(dev <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = symmetrize(&matrix);
        let trace = matrix.trace().re;
        if !((trace - 1.0).abs() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidTrace(trace));
        }
        let (values, vectors) = hermitian_eigen(&matrix);
        Self::from_parts(matrix, values, vectors)
    }

    /// Divides a positive semidefinite Hermitian matrix by its trace.
    pub fn normalized(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let trace = matrix.trace().re;
        if !(trace > 0.0 && trace.is_finite()) {
            return Err(Error::InvalidTrace(trace));
        }
        let dev = hermitian_deviation(&matrix) / trace;
        if !(dev <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = symmetrize(&matrix).unscale(trace);
        let (values, vectors) = hermitian_eigen(&matrix);
        Self::from_parts(matrix, values, vectors)
    }

    fn from_parts(matrix: CMatrix, mut values: DVector<f64>, vectors: CMatrix) -> Result<Self> {
        let min = values.min();
        if min < -EIGEN_THRESHOLD {
            return Err(Error::NotPositive(min));
        }
        values.apply(|v| {
            if *v <= EIGEN_THRESHOLD {
                *v = 0.0
            }
        });
        Ok(Self {
            matrix,
            eigenvalues: values,
            eigenvectors: vectors,
        })
    }

    /// Builds `sum_k p_k v_k v_k^dagger` from a probability vector and
    /// orthonormal columns. The spectrum is trusted as given.
    pub(crate) fn from_spectrum(probabilities: DVector<f64>, vectors: CMatrix) -> Self {
        let matrix = symmetrize(&spectral_sum(&probabilities, &vectors, |p| p));
        Self {
            matrix,
            eigenvalues: probabilities,
            eigenvectors: vectors,
        }
    }

    /// Rank-one projector onto `span(psi)`; `psi` is normalized here.
    pub fn pure_state(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let unit = psi.unscale(norm);
        Self::new(&unit * unit.adjoint())
    }

    /// Diagonal state with the given probabilities in the standard basis.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_iterator(
            probabilities.len(),
            probabilities.iter().map(|&p| c(p)),
        )))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let n = dim as f64;
        Self {
            matrix: CMatrix::identity(dim, dim).unscale(n),
            eigenvalues: DVector::from_element(dim, 1.0 / n),
            eigenvectors: CMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Clamped eigenvalues, matching the columns of [`DensityMatrix::eigenvectors`].
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&v| v > EIGEN_THRESHOLD)
            .count()
    }

    /// Orthogonal projector onto the support.
    pub fn support_projector(&self) -> CMatrix {
        spectral_sum(&self.eigenvalues, &self.eigenvectors, |v| {
            if v > EIGEN_THRESHOLD {
                1.0
            } else {
                0.0
            }
        })
    }

    /// `-tr(rho ln rho)` with `0 ln 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        -self
            .eigenvalues
            .iter()
            .filter(|&&v| v > EIGEN_THRESHOLD)
            .map(|v| v * v.ln())
            .sum::<f64>()
    }

    /// The conditioned state `diag(rho)` in `basis`.
    pub fn conditioned(&self, basis: &Basis) -> Result<Self> {
        let m = diag_conditional(&self.matrix, basis)?;
        Self::new(m)
    }
}

/// Orthonormal basis of `C^d`, stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: CMatrix,
    standard: bool,
}

impl Basis {
    pub fn new(vectors: CMatrix) -> Result<Self> {
        let d = check_square(&vectors)?;
        let gram = vectors.adjoint() * &vectors - CMatrix::identity(d, d);
        let dev = gram.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if !(dev <= BASIS_TOLERANCE) {
            return Err(Error::NonOrthonormalBasis(dev));
        }
        Ok(Self {
            vectors,
            standard: false,
        })
    }

    pub fn standard(dim: usize) -> Self {
        Self {
            vectors: CMatrix::identity(dim, dim),
            standard: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Matrix elements `<psi_m| B psi_n>` in this basis.
    pub fn coordinates(&self, b: &CMatrix) -> CMatrix {
        if self.standard {
            b.clone()
        } else {
            self.vectors.adjoint() * b * &self.vectors
        }
    }

    /// Largest modulus of the off-diagonal elements of `b` in this basis.
    pub fn off_diagonal_norm(&self, b: &CMatrix) -> f64 {
        let m = self.coordinates(b);
        let mut off: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    off = off.max(m[(i, j)].norm());
                }
            }
        }
        off
    }
}

/// `diag(B) = sum_n <psi_n|B psi_n> |psi_n><psi_n|`, written in the standard
/// basis.
///
/// Together with the algebra of operators diagonal in `basis` this is a
/// conditional expectation: unital, adjoint-preserving, positive, and
/// `E(AB) = A E(B)` for diagonal `A`.
pub fn diag_conditional(b: &CMatrix, basis: &Basis) -> Result<CMatrix> {
    let d = check_square(b)?;
    check_dims(basis.dim(), d)?;
    let coords = basis.coordinates(b);
    let diag = CMatrix::from_diagonal(&coords.diagonal());
    if basis.standard {
        Ok(diag)
    } else {
        Ok(&basis.vectors * diag * basis.vectors.adjoint())
    }
}

/// Whether `R(sigma)` is contained in `R(rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportRelation {
    pub contained: bool,
    pub threshold: f64,
    /// Frobenius norm of `(I - P_rho) P_sigma`.
    pub leak: f64,
}

pub fn support_relation(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<SupportRelation> {
    check_dims(sigma.dim(), rho.dim())?;
    let d = sigma.dim();
    let outside = CMatrix::identity(d, d) - rho.support_projector();
    let leak = (outside * sigma.support_projector()).norm();
    Ok(SupportRelation {
        contained: leak <= SUPPORT_TOLERANCE,
        threshold: EIGEN_THRESHOLD,
        leak,
    })
}

/// `D(sigma || rho) = tr sigma ln sigma - tr sigma ln rho`.
///
/// Evaluated in the two eigenbases with `0 ln 0 = 0`. A support of `sigma`
/// that leaks out of the support of `rho` makes the divergence infinite and
/// is reported as [`Error::SupportViolation`].
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    let support = support_relation(sigma, rho)?;
    if !support.contained {
        return Err(Error::SupportViolation(support.leak));
    }
    let neg_entropy = -sigma.von_neumann_entropy();
    // diagonal of sigma in rho's eigenbasis
    let v = rho.eigenvectors();
    let mut cross = 0.0;
    for (k, &lambda) in rho.eigenvalues().iter().enumerate() {
        if lambda <= EIGEN_THRESHOLD {
            continue;
        }
        let col = v.column(k);
        let weight = (col.adjoint() * sigma.matrix() * col)[(0, 0)].re;
        cross += weight * lambda.ln();
    }
    Ok(neg_entropy - cross)
}

/// `sum_{lambda_k > threshold} ln(lambda_k) P_k`; zero on the kernel.
pub fn matrix_log_on_support(rho: &DensityMatrix) -> HermitianOperator {
    let m = spectral_sum(rho.eigenvalues(), rho.eigenvectors(), |v| {
        if v > EIGEN_THRESHOLD {
            v.ln()
        } else {
            0.0
        }
    });
    HermitianOperator {
        matrix: symmetrize(&m),
    }
}

/// Exponential of a Hermitian operator restricted to a projector:
/// `P exp(H) P`, evaluated spectrally.
pub fn exp_on_support(h: &HermitianOperator, projector: &CMatrix) -> CMatrix {
    let (values, vectors) = h.eigen();
    let e = spectral_sum(&values, &vectors, f64::exp);
    projector * e * projector
}
