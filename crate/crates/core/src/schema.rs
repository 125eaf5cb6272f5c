//! JSON wire formats read and written by the command-line tool.
//!
//! Complex matrices are `{"dim": d, "re": [[..]], "im": [[..]]}` and complex
//! vectors `{"re": [..], "im": [..]}`.

use serde::{Deserialize, Serialize};

use crate::bose_model::BoseFitReport;
use crate::density_core::{CMatrix, CVector, C64};
use crate::quantum_model::ProjectionReport;
use crate::weak_measurement::{ScanRow, WeakValueResult};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ComplexMatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d == 0 || !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::InvalidArgument(format!(
                "complex matrix must have {d} rows of {d} entries in both re and im"
            )));
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            C64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

impl From<&CMatrix> for ComplexMatrixJson {
    fn from(m: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexVectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVectorJson {
    pub fn to_vector(&self) -> Result<CVector> {
        if self.re.len() != self.im.len() || self.re.is_empty() {
            return Err(Error::InvalidArgument(
                "complex vector needs non-empty re and im of equal length".into(),
            ));
        }
        Ok(CVector::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)),
        ))
    }
}

impl From<&CVector> for ComplexVectorJson {
    fn from(v: &CVector) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }
}

/// Bose data file: `{"spectrum": [..], "occupations": [..]}`.
///
/// `beta`/`mu` give a model point (input of `sample-bose`, optional point for
/// `bose-geometry`); `shots` records how many draws were averaged into
/// `occupations`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoseInputJson {
    pub spectrum: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupations: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoseFitJson {
    pub beta: f64,
    pub mu: f64,
    pub divergence: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Row-major 2x2.
    pub metric: [[f64; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<[f64; 2]>,
}

impl BoseFitJson {
    pub fn from_report(report: &BoseFitReport, shots: Option<u64>) -> Self {
        Self {
            beta: report.point.beta,
            mu: report.point.mu,
            divergence: report.divergence_at_min,
            iterations: report.iterations,
            gradient_norm: report.gradient_norm,
            metric: report.metric,
            standard_errors: shots.map(|s| report.standard_errors(s as f64)),
        }
    }
}

/// Model file: `{"dim": d, "generators": [..], "theta": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub dim: usize,
    pub generators: Vec<ComplexMatrixJson>,
    #[serde(default)]
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub theta_hat: Vec<f64>,
    pub divergence: f64,
    pub moment_residual: f64,
    pub pythagoras_residual: f64,
    pub iterations: usize,
    pub rho_hat: ComplexMatrixJson,
}

impl From<&ProjectionReport> for ProjectionJson {
    fn from(r: &ProjectionReport) -> Self {
        Self {
            theta_hat: r.theta_hat.clone(),
            divergence: r.divergence,
            moment_residual: r.moment_residual,
            pythagoras_residual: r.pythagoras_residual,
            iterations: r.iterations,
            rho_hat: r.rho_hat.matrix().into(),
        }
    }
}

/// Selection file: `{"pre": <vector>, "post": <vector>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionJson {
    pub pre: ComplexVectorJson,
    pub post: ComplexVectorJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakValueJson {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub overlap_probability: f64,
}

impl From<&WeakValueResult> for WeakValueJson {
    fn from(w: &WeakValueResult) -> Self {
        Self {
            re: w.value.re,
            im: w.value.im,
            abs: w.value.norm(),
            overlap_probability: w.overlap_probability,
        }
    }
}

/// Scan rows as `[eps, |value|, overlap_probability]` triples.
pub fn scan_triples(rows: &[ScanRow]) -> Vec<[f64; 3]> {
    rows.iter()
        .map(|r| [r.eps, r.abs_value, r.overlap_probability])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeEntropyJson {
    pub divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub detail: String,
}

/// `{"error": {"kind": .., "detail": ..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: ErrorDetail,
}

impl ErrorJson {
    pub fn new(kind: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            error: ErrorDetail {
                kind: kind.into(),
                detail: detail.into(),
            },
        }
    }
}

impl From<&Error> for ErrorJson {
    fn from(e: &Error) -> Self {
        Self::new(e.kind(), e.to_string())
    }
}
