//! Metric, connection and covariant Hessian of the Bose manifold in `(beta, mu)`.

use serde::{Deserialize, Serialize};

use crate::bose_model::{
    divergence_gradient, divergence_hessian, occupation, BoseModelPoint, EnergySpectrum,
    OccupationSequence,
};
use crate::Result;

/// Coordinate labels of the two-dimensional manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Beta = 0,
    Mu = 1,
}

/// Symmetric 2x2 metric in `(beta, mu)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor2 {
    entries: [[f64; 2]; 2],
    positive_definite: bool,
}

impl MetricTensor2 {
    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    pub fn get(&self, a: Coord, b: Coord) -> f64 {
        self.entries[a as usize][b as usize]
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    /// False for a single level, where the metric is a rank-one outer product.
    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    pub fn inverse(&self) -> Option<[[f64; 2]; 2]> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.entries;
        Some([[d / det, -b / det], [-c / det, a / det]])
    }
}

/// `g = sum_j w_j [[(eps_j - mu)^2, -beta (eps_j - mu)], [-beta (eps_j - mu), beta^2]]`
/// with `w_j = e^x / (e^x - 1)^2 = f_j (1 + f_j)` at `x = beta (eps_j - mu)`.
pub fn metric(spectrum: &EnergySpectrum, point: &BoseModelPoint) -> Result<MetricTensor2> {
    let f = occupation(spectrum, point)?;
    let beta = point.beta;
    let mut g = [[0.0; 2]; 2];
    for (fj, e) in f.iter().zip(spectrum.levels()) {
        let w = fj * (1.0 + fj);
        let gap = e - point.mu;
        g[0][0] += w * gap * gap;
        g[0][1] -= w * beta * gap;
        g[1][1] += w * beta * beta;
    }
    g[1][0] = g[0][1];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    // Cauchy-Schwarz makes det >= 0; relative cutoff separates rank one.
    let positive_definite = g[0][0] > 0.0 && det > 1e-12 * g[0][0] * g[1][1];
    Ok(MetricTensor2 {
        entries: g,
        positive_definite,
    })
}

/// Connection coefficients `omega^c_ab`, stored as `[c][a][b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection2 {
    coefficients: [[[f64; 2]; 2]; 2],
}

impl Connection2 {
    pub fn coefficient(&self, upper: Coord, a: Coord, b: Coord) -> f64 {
        self.coefficients[upper as usize][a as usize][b as usize]
    }

    pub fn coefficients(&self) -> [[[f64; 2]; 2]; 2] {
        self.coefficients
    }
}

/// Only `omega^mu_{beta mu} = omega^mu_{mu beta} = 1 / beta` is non-zero.
pub fn connection(point: &BoseModelPoint) -> Connection2 {
    let mut coefficients = [[[0.0; 2]; 2]; 2];
    let m = Coord::Mu as usize;
    let b = Coord::Beta as usize;
    coefficients[m][b][m] = 1.0 / point.beta;
    coefficients[m][m][b] = 1.0 / point.beta;
    Connection2 { coefficients }
}

/// `H_ab - omega^c_ab G_c`, with `H` and `G` the coordinate Hessian and gradient
/// of the divergence at `point`. Independent of `n`.
pub fn covariant_hessian(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<[[f64; 2]; 2]> {
    let h = divergence_hessian(n, spectrum, point)?;
    let g = divergence_gradient(n, spectrum, point)?;
    let omega = connection(point).coefficients();
    let mut out = h;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                out[a][b] -= omega[c][a][b] * g[c];
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub mu_beta_mu: f64,
}

/// Geometry report as written by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub metric: [[f64; 2]; 2],
    pub connection: ConnectionJson,
    pub covariant_hessian: [[f64; 2]; 2],
}

pub fn geometry_report(
    n: &OccupationSequence,
    spectrum: &EnergySpectrum,
    point: &BoseModelPoint,
) -> Result<GeometryReport> {
    Ok(GeometryReport {
        metric: metric(spectrum, point)?.entries(),
        connection: ConnectionJson {
            mu_beta_mu: connection(point).coefficient(Coord::Mu, Coord::Beta, Coord::Mu),
        },
        covariant_hessian: covariant_hessian(n, spectrum, point)?,
    })
}
