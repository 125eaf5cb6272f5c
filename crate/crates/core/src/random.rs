//! Random ensembles of states and operators, for property checks and demos.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::density_core::{CMatrix, CVector, DensityMatrix, HermitianOperator, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `G G^dagger / tr(G G^dagger)` for a `d x d` Ginibre `G`; full rank almost surely.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    density_matrix_with_rank(rng, dim, dim)
}

/// Random state of the given rank (`d x rank` Ginibre factor).
pub fn density_matrix_with_rank<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    DensityMatrix::normalized(&g * g.adjoint()).expect("Gram matrix is positive semidefinite")
}

/// Random diagonal state with entries bounded below by `floor`.
pub fn diagonal_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, floor: f64) -> DensityMatrix {
    let raw: Vec<f64> = (0..dim).map(|_| floor + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
    DensityMatrix::normalized(CMatrix::from_diagonal(&CVector::from_iterator(
        dim,
        probs.iter().map(|&p| C64::new(p, 0.0)),
    )))
    .expect("positive diagonal")
}

/// `(G + G^dagger) / 2` for a Ginibre `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    HermitianOperator::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized")
}

/// Random real diagonal operator.
pub fn diagonal_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    let d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    HermitianOperator::from_real_diagonal(&d).expect("real diagonal")
}

/// Arbitrary complex matrix, not necessarily Hermitian.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    ginibre(rng, dim, dim)
}

/// Uniformly random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
