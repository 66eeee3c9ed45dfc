//! Positive semi-definite checks, square roots and polar moduli.

use super::eigen::eigh;
use super::svd::{svd, weighted_outer_sum};
use super::{ComplexMatrix, C64};
use crate::error::{invalid, Error, Result};

/// Relative tolerance used when a call does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of a PSD test together with the smallest eigenpair.
#[derive(Clone, Debug)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector for `min_eigenvalue`.
    pub witness: Vec<C64>,
    /// Largest entry of `|A - A†|`.
    pub hermiticity_defect: f64,
    /// Operator norm of the Hermitian part; the tolerance is scaled by `max(1, scale)`.
    pub scale: f64,
}

/// Tests `A ⪰ 0`: Hermitian to within `tol·max(1, ‖A‖_∞)` entrywise and
/// smallest eigenvalue at least `-tol·max(1, ‖A‖_∞)`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<PsdReport> {
    if !a.is_square() {
        return invalid(format!(
            "PSD test needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        ));
    }
    let eig = eigh(a)?;
    let scale = eig.spectral_radius();
    let slack = tol * scale.max(1.0);
    let defect = a.hermiticity_defect();
    let min_eigenvalue = eig.min_value();
    let witness = if a.rows() > 0 {
        eig.vector(0)
    } else {
        Vec::new()
    };
    Ok(PsdReport {
        is_psd: defect <= slack && min_eigenvalue >= -slack,
        min_eigenvalue,
        witness,
        hermiticity_defect: defect,
        scale,
    })
}

/// Principal square root of a PSD matrix with the default tolerance.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_with_tol(a, DEFAULT_TOL)
}

/// Principal square root; eigenvalues in `[-tol·scale, 0)` are clamped to zero,
/// as are positive eigenvalues at roundoff level.
pub fn psd_sqrt_with_tol(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return invalid("square root needs a square matrix");
    }
    let eig = eigh(a)?;
    let slack = tol * eig.spectral_radius().max(1.0);
    if eig.min_value() < -slack || a.hermiticity_defect() > slack {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_value(),
        });
    }
    // Eigenvalues at roundoff level are zero; their square roots would not be.
    let floor = a.rows() as f64 * f64::EPSILON * eig.spectral_radius();
    Ok(eig.reconstruct_with(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}

/// The two polar moduli of a square `σ`: `((σσ†)^{1/2}, (σ†σ)^{1/2})`.
///
/// Both are assembled from one SVD `σ = U S V†` as `U S U†` and `V S V†`, so
/// they share σ's singular values exactly.
pub fn polar_abs(sigma: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !sigma.is_square() {
        return invalid(format!(
            "polar moduli need a square matrix, got {}x{}",
            sigma.rows(),
            sigma.cols()
        ));
    }
    let d = svd(sigma)?;
    let left = weighted_outer_sum(&d.u, &d.s, &d.u);
    let right = weighted_outer_sum(&d.v, &d.s, &d.v);
    Ok((left, right))
}
