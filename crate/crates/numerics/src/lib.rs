//! Dense complex linear-algebra and optimization kernel.
//!
//! Everything here is small-scale and dependency-light: a row-major complex
//! matrix type, a cyclic Jacobi eigensolver for Hermitian matrices, a
//! Durand–Kerner polynomial root finder, unitary Procrustes alignment and a
//! dense two-phase simplex solver that returns either conic weights or a
//! Farkas certificate.

pub mod cjson;
mod eigen;
mod error;
mod lp;
mod matrix;
mod procrustes;
mod psd;
mod roots;

pub use eigen::{hermitian_eigendecompose, normal_eigendecompose, HermitianEig, NormalEig};
pub use error::NumericsError;
pub use lp::{solve_conic_lp, ConicLpOutcome};
pub use matrix::ComplexMatrix;
pub use procrustes::{polar_unitary, procrustes_unitary};
pub use psd::{psd_check, PsdReport};
pub use roots::{poly_eval, poly_from_roots, polynomial_roots};

pub use num_complex::Complex64 as C64;

pub type Result<T> = std::result::Result<T, NumericsError>;

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// `e^{2πi·k/q}` with the exponent reduced mod `q` before the trig call.
#[inline]
pub fn root_of_unity(k: i64, q: u64) -> C64 {
    let r = k.rem_euclid(q as i64) as f64;
    cis(std::f64::consts::TAU * r / q as f64)
}

/// Integer power of a complex number, negative exponents allowed.
pub fn cpow(z: C64, e: i64) -> C64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        z.powu((-e) as u32).inv()
    }
}

/// Shortest distance between two points of the circle measured as angle.
pub fn arc_distance(a: C64, b: C64) -> f64 {
    let d = (a.arg() - b.arg()).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
