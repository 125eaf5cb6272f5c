//! Weak values of pre- and post-selected states.
//!
//! For a preselected `psi`, a postselected `psi_f` and an observable `C`, the
//! weak value is `<psi_f|C psi> / <psi_f|psi>`. It grows without bound as the
//! overlap of the two states shrinks. Only the system part is modelled; the
//! pointer/apparatus coupling is not simulated.

use serde::{Deserialize, Serialize};

use crate::density_core::{CVector, HermitianOperator, C64};
use crate::{Error, Result};

/// Normalized pre- and post-selected states with their cached overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct PrePostSelection {
    pre: CVector,
    post: CVector,
    overlap: C64,
}

fn checked_norm(v: &CVector) -> Result<f64> {
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

impl PrePostSelection {
    /// Normalizes both vectors. The overlap is taken from the raw inner
    /// product and divided by the norms afterwards, which keeps its relative
    /// accuracy when the two states are nearly orthogonal.
    pub fn new(pre: &CVector, post: &CVector) -> Result<Self> {
        if pre.len() != post.len() {
            return Err(Error::DimensionMismatch {
                expected: pre.len(),
                got: post.len(),
            });
        }
        let pre_norm = checked_norm(pre)?;
        let post_norm = checked_norm(post)?;
        let overlap = post.dotc(pre) / (pre_norm * post_norm);
        Ok(Self {
            pre: pre.unscale(pre_norm),
            post: post.unscale(post_norm),
            overlap,
        })
    }

    pub fn pre(&self) -> &CVector {
        &self.pre
    }

    pub fn post(&self) -> &CVector {
        &self.post
    }

    /// `<psi_f|psi>`.
    pub fn overlap(&self) -> C64 {
        self.overlap
    }

    pub fn dim(&self) -> usize {
        self.pre.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueOptions {
    /// Selections with `|<psi_f|psi>|` at or below this are rejected.
    pub overlap_floor: f64,
}

impl Default for WeakValueOptions {
    fn default() -> Self {
        Self {
            overlap_floor: 1e-300,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueResult {
    pub value: C64,
    /// `|<psi_f|psi>|^2`.
    pub overlap_probability: f64,
}

pub fn weak_value(selection: &PrePostSelection, c: &HermitianOperator) -> Result<WeakValueResult> {
    weak_value_with(selection, c, &WeakValueOptions::default())
}

/// `<psi_f|C psi> / <psi_f|psi>`, returned as a complex number.
pub fn weak_value_with(
    selection: &PrePostSelection,
    c: &HermitianOperator,
    options: &WeakValueOptions,
) -> Result<WeakValueResult> {
    if c.dim() != selection.dim() {
        return Err(Error::DimensionMismatch {
            expected: selection.dim(),
            got: c.dim(),
        });
    }
    let overlap = selection.overlap;
    if overlap.norm() <= options.overlap_floor {
        return Err(Error::OrthogonalSelection);
    }
    let numerator = selection.post.dotc(&(c.matrix() * &selection.pre));
    Ok(WeakValueResult {
        value: numerator / overlap,
        overlap_probability: overlap.norm_sqr().min(1.0),
    })
}

/// Preselection `(1, delta)` and postselection `(1, -1)`, both normalized.
/// With `C = sigma_z` the weak value is `(1 + delta) / (1 - delta)`.
pub fn delta_family(delta: f64) -> Result<PrePostSelection> {
    let pre = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(delta, 0.0)]);
    let post = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
    PrePostSelection::new(&pre, &post)
}

/// One row of an amplification scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub eps: f64,
    pub abs_value: f64,
    pub overlap_probability: f64,
}

/// Tabulates `|weak value|` and the overlap probability along a family of
/// selections.
pub fn amplification_scan<F>(
    family: F,
    c: &HermitianOperator,
    eps_values: &[f64],
) -> Result<Vec<ScanRow>>
where
    F: Fn(f64) -> Result<PrePostSelection>,
{
    eps_values
        .iter()
        .map(|&eps| {
            let selection = family(eps)?;
            let wv = weak_value(&selection, c)?;
            Ok(ScanRow {
                eps,
                abs_value: wv.value.norm(),
                overlap_probability: wv.overlap_probability,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density_core::{pauli_x, pauli_z};

    fn cv(xs: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(xs.len(), xs.iter().map(|&(r, i)| C64::new(r, i)))
    }

    #[test]
    fn same_state_gives_expectation() {
        let psi = cv(&[(0.6, 0.0), (0.0, 0.8)]);
        let sel = PrePostSelection::new(&psi, &psi).unwrap();
        let wv = weak_value(&sel, &pauli_z()).unwrap();
        assert!((wv.value - C64::new(0.36 - 0.64, 0.0)).norm() < 1e-15);
        assert!((wv.overlap_probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_gives_one() {
        let sel = PrePostSelection::new(
            &cv(&[(0.3, 0.1), (0.2, -0.7)]),
            &cv(&[(0.5, 0.5), (0.1, 0.0)]),
        )
        .unwrap();
        let wv = weak_value(&sel, &HermitianOperator::identity(2)).unwrap();
        assert!((wv.value - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn delta_family_value() {
        let wv = weak_value(&delta_family(0.9).unwrap(), &pauli_z()).unwrap();
        assert!((wv.value - C64::new(19.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_selection_is_rejected() {
        let sel = PrePostSelection::new(
            &cv(&[(1.0, 0.0), (0.0, 0.0)]),
            &cv(&[(0.0, 0.0), (1.0, 0.0)]),
        )
        .unwrap();
        assert_eq!(
            weak_value(&sel, &pauli_x()).unwrap_err(),
            Error::OrthogonalSelection
        );
        assert_eq!(
            PrePostSelection::new(&cv(&[(0.0, 0.0)]), &cv(&[(1.0, 0.0)])).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn constant_family_scan_is_constant() {
        let rows = amplification_scan(|_| delta_family(0.5), &pauli_z(), &[0.1, 0.2, 0.3]).unwrap();
        assert!(rows.windows(2).all(|w| w[0].abs_value == w[1].abs_value
            && w[0].overlap_probability == w[1].overlap_probability));
    }
}
