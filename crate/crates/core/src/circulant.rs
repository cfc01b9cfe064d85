//! Generalized circulants: polynomials in the twisted shift `u_θ`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use tcone_numerics::{cis, cjson, root_of_unity, solve_conic_lp, ComplexMatrix, ConicLpOutcome, C64};

use crate::toeplitz::check_unit;
use crate::{Error, Result};

/// `g(u_θ) = Σ αⱼ u_θʲ` with `u_θ = r₁ + e^{iθ} r_{−n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedCirculant {
    pub n: usize,
    pub theta: f64,
    #[serde(with = "cjson::vec")]
    pub poly: Vec<C64>,
}

impl GeneralizedCirculant {
    pub fn new(n: usize, theta: f64, poly: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("circulant dimension must be at least 1".into()));
        }
        if poly.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: poly.len() });
        }
        Ok(GeneralizedCirculant { n, theta, poly })
    }

    /// `(i, j)` entry `α_{i−j}` on and below the diagonal, `e^{iθ} α_{n−j+i}` above.
    pub fn dense(&self) -> ComplexMatrix {
        let twist = cis(self.theta);
        ComplexMatrix::from_fn(self.n, self.n, |i, j| {
            if i >= j {
                self.poly[i - j]
            } else {
                self.poly[self.n - (j - i)] * twist
            }
        })
    }

    /// `g(μ_k)` for `μ_k = e^{i(θ+2πk)/n}`, in the order of [`diagonalize_circulant`].
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.n)
            .map(|k| (0..self.n).map(|j| self.poly[j] * eigen_power(self.n, self.theta, k, j as i64)).sum())
            .collect()
    }
}

/// `μ_k^e` with `μ_k = e^{i(θ+2πk)/n}`.
fn eigen_power(n: usize, theta: f64, k: usize, e: i64) -> C64 {
    cis(e as f64 * theta / n as f64) * root_of_unity(e * k as i64, n as u64)
}

pub fn u_theta(n: usize, theta: f64) -> Result<GeneralizedCirculant> {
    if n < 2 {
        return Err(Error::InvalidArgument("u_theta needs n >= 2".into()));
    }
    let mut poly = vec![C64::new(0.0, 0.0); n];
    poly[1] = C64::new(1.0, 0.0);
    GeneralizedCirculant::new(n, theta, poly)
}

/// Unitary `v` and eigenvalues of `u_θ` with `v* u_θ v` diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantBasis {
    pub v: ComplexMatrix,
    pub eigenvalues: Vec<C64>,
}

/// Column `k` is `(μ_k^{−j}/√n)_j`; eigenvalue phases ascend from `θ/n`.
pub fn diagonalize_circulant(n: usize, theta: f64) -> Result<CirculantBasis> {
    if n < 2 {
        return Err(Error::InvalidArgument("diagonalize_circulant needs n >= 2".into()));
    }
    let s = (n as f64).sqrt().recip();
    let v = ComplexMatrix::from_fn(n, n, |j, k| eigen_power(n, theta, k, -(j as i64)) * s);
    let eigenvalues = (0..n).map(|k| eigen_power(n, theta, k, 1)).collect();
    Ok(CirculantBasis { v, eigenvalues })
}

/// `F(x) = v·diag(v* x v)·v*` as a circulant.
pub fn circulant_expectation(x: &ComplexMatrix, theta: f64) -> Result<GeneralizedCirculant> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: x.cols() });
    }
    let n = x.rows();
    if n == 1 {
        return GeneralizedCirculant::new(1, theta, vec![x[(0, 0)]]);
    }
    let basis = diagonalize_circulant(n, theta)?;
    let diag: Vec<C64> = (0..n).map(|k| x.quadratic_form(&basis.v.column(k))).collect();
    let poly = (0..n)
        .map(|j| {
            diag.iter().enumerate().map(|(k, d)| d * eigen_power(n, theta, k, -(j as i64))).sum::<C64>()
                / n as f64
        })
        .collect();
    GeneralizedCirculant::new(n, theta, poly)
}

/// Rank-one projections `v_k v_k*` spanning the positive cone of `C^{n,θ}`.
pub fn fourier_atoms(n: usize, theta: f64) -> Result<Vec<ComplexMatrix>> {
    let basis = diagonalize_circulant(n, theta)?;
    Ok((0..n)
        .map(|k| {
            let c = ComplexMatrix::column_vector(&basis.v.column(k));
            c.matmul(&c.adjoint())
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CornerOutcome {
    Feasible {
        /// spectrum of the realizing circulant
        weights: Vec<f64>,
        circulant: GeneralizedCirculant,
    },
    Infeasible {
        farkas: Vec<f64>,
        margin: f64,
    },
}

impl CornerOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CornerOutcome::Feasible { .. })
    }
}

/// Whether `[[1, ζ̄], [ζ, 1]]` is the upper-left corner of a positive
/// `m×m` circulant (`θ = 0`), decided by an LP over the `m` Fourier atoms.
pub fn circulant_corner_test(zeta: C64, m: usize, tol: f64) -> Result<CornerOutcome> {
    check_unit(zeta)?;
    if m < 3 {
        return Err(Error::InvalidArgument("corner test needs m >= 3".into()));
    }
    let generators: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let back = root_of_unity(-(k as i64), m as u64) / m as f64;
            vec![1.0 / m as f64, back.re, back.im]
        })
        .collect();
    match solve_conic_lp(&generators, &[1.0, zeta.re, zeta.im], tol)? {
        ConicLpOutcome::Feasible { weights, .. } => {
            let poly = (0..m)
                .map(|j| {
                    weights
                        .iter()
                        .enumerate()
                        .map(|(k, w)| root_of_unity(-((j * k) as i64), m as u64) * *w)
                        .sum::<C64>()
                        / m as f64
                })
                .collect();
            Ok(CornerOutcome::Feasible { weights, circulant: GeneralizedCirculant::new(m, 0.0, poly)? })
        }
        ConicLpOutcome::Infeasible { farkas, margin } => Ok(CornerOutcome::Infeasible { farkas, margin }),
    }
}

/// Angles `θ/n + 2πk/n` of the eigenvalues of `u_θ`.
pub fn eigen_angles(n: usize, theta: f64) -> Vec<f64> {
    (0..n).map(|k| (theta + TAU * k as f64) / n as f64).collect()
}
