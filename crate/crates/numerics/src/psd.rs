use serde::{Deserialize, Serialize};

use crate::{hermitian_eigendecompose, ComplexMatrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub passes: bool,
    pub tolerance_used: f64,
}

/// Smallest eigenvalue of `h` and whether it clears `−tol`.
pub fn psd_check(h: &ComplexMatrix, tol: f64) -> Result<PsdReport> {
    let eig = hermitian_eigendecompose(h)?;
    let min_eigenvalue = eig.min_eigenvalue();
    Ok(PsdReport { min_eigenvalue, passes: min_eigenvalue >= -tol, tolerance_used: tol })
}
