use nalgebra::{DMatrix, Schur, SVD};

use crate::error::{Error, Result};

/// Largest eigenvalue magnitude.
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Largest singular value. Zero for an empty matrix.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    match SVD::try_new(a.clone(), false, false, f64::EPSILON, 0) {
        Some(svd) => svd.singular_values.max(),
        // Frobenius is a safe over-estimate if the iteration stalls.
        None => a.norm(),
    }
}

/// Cheap upper bound on the spectral norm: `min(‖A‖_F, sqrt(‖A‖₁‖A‖∞))`.
pub(crate) fn norm_upper_estimate(a: &DMatrix<f64>) -> f64 {
    let one = a
        .column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let inf = a
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    a.norm().min((one * inf).sqrt())
}
