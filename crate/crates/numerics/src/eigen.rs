//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64 as C64;

use crate::{ComplexMatrix, NumericsError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching unitary matrix of
/// column eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V·diag(λ)·V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)).collect();
        let vd = self.vectors.matmul(&ComplexMatrix::from_diag(&d));
        vd.matmul(&self.vectors.adjoint())
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Input is accepted when `‖H − H*‖_F ≤ 1e−12·max(1, ‖H‖_F)`; the Hermitian
/// part is what gets diagonalized. Sweeps stop once the off-diagonal mass
/// drops below `1e−13·‖H‖_F`.
pub fn hermitian_eigendecompose(h: &ComplexMatrix) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(NumericsError::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    if !h.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let norm = h.frobenius_norm();
    let defect = h.hermitian_defect();
    if defect > 1e-12 * norm.max(1.0) {
        return Err(NumericsError::NonHermitian { defect });
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = 1e-13 * norm;

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEig { eigenvalues, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One rotation `A ← J* A J`, `V ← V J` zeroing `a_pq`, with
/// `J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]]` on coordinates `(p, q)`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Rotation already negligible at working precision.
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase * s; // s·e^{iφ}
    let n = a.rows();

    // Columns: A ← A J.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * sp.conj();
        a[(k, q)] = akp * sp + akq * c;
    }
    // Rows: A ← J* A.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * sp;
        a[(q, k)] = apk * sp.conj() + aqk * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sp.conj();
        v[(k, q)] = vkp * sp + vkq * c;
    }
}

/// Eigenvalues and eigenvectors of a normal matrix.
#[derive(Debug, Clone)]
pub struct NormalEig {
    pub eigenvalues: Vec<C64>,
    pub vectors: ComplexMatrix,
    /// `‖V* N V − diag‖_F`.
    pub residual: f64,
}

/// Diagonalizes a normal matrix `N` through the Hermitian pencil
/// `Re N + α·Im N`, where `Re N = (N + N*)/2` and `Im N = (N − N*)/2i`.
///
/// The two parts commute, so a generic `α` separates the eigenvalues. A few
/// fixed values of `α` are tried and the one with the smallest
/// off-diagonal residual wins.
pub fn normal_eigendecompose(m: &ComplexMatrix) -> Result<NormalEig> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let adj = m.adjoint();
    let re = (m + &adj).scale_real(0.5);
    let im = (m - &adj).scale(C64::new(0.0, -0.5));
    let scale = m.frobenius_norm().max(1.0);

    let mut best: Option<NormalEig> = None;
    for alpha in [0.618_033_988_749_895, -1.324_717_957_244_746, std::f64::consts::E, 0.141_421_356_237_309_5] {
        let pencil = &re + &im.scale_real(alpha);
        let eig = hermitian_eigendecompose(&pencil.hermitian_part())?;
        let d = eig.vectors.adjoint().matmul(m).matmul(&eig.vectors);
        let eigenvalues: Vec<C64> = (0..n).map(|i| d[(i, i)]).collect();
        let residual = (&d - &ComplexMatrix::from_diag(&eigenvalues)).frobenius_norm();
        let candidate = NormalEig { eigenvalues, vectors: eig.vectors, residual };
        let done = residual <= 1e-12 * scale;
        if best.as_ref().is_none_or(|b| candidate.residual < b.residual) {
            best = Some(candidate);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one pencil is tried"))
}
