//! Unitary Procrustes alignment via the polar decomposition.

use num_complex::Complex64 as C64;

use crate::{hermitian_eigendecompose, ComplexMatrix};

/// Unitary `W` minimizing `‖A·W − B‖_F` for `A`, `B` of equal shape `q×r`.
///
/// `W` is the unitary polar factor of `A*B`. Directions where `A*B` is
/// singular are completed by an arbitrary but deterministic unitary.
pub fn procrustes_unitary(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()), "Procrustes operands must share a shape");
    polar_unitary(&a.adjoint().matmul(b))
}

/// Unitary factor `U` of a polar decomposition `M = U·P`, `P ⪰ 0`.
///
/// Singular vectors come from the Hermitian dilation `[[0, M], [M*, 0]]`,
/// whose eigenpairs are `±σ` with vectors `(p; ±q)/√2`.
pub fn polar_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square(), "polar factor needs a square matrix");
    let r = m.rows();
    if r == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let mut dilation = ComplexMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            dilation[(i, r + j)] = m[(i, j)];
            dilation[(r + j, i)] = m[(i, j)].conj();
        }
    }
    let fallback = ComplexMatrix::identity(r);
    let eig = match hermitian_eigendecompose(&dilation) {
        Ok(e) => e,
        Err(_) => return fallback,
    };
    let sigma_max = eig.max_eigenvalue();
    if sigma_max.is_nan() || sigma_max <= 0.0 {
        return fallback;
    }
    let threshold = 1e-12 * sigma_max;

    let mut left: Vec<Vec<C64>> = Vec::new();
    let mut right: Vec<Vec<C64>> = Vec::new();
    for k in (0..2 * r).rev() {
        if eig.eigenvalues[k] <= threshold || left.len() == r {
            break;
        }
        let v = eig.vector(k);
        let p = v[..r].to_vec();
        let q = v[r..].to_vec();
        let (Some(p), Some(q)) = (orthogonalize(&p, &left), orthogonalize(&q, &right)) else {
            continue;
        };
        left.push(p);
        right.push(q);
    }
    complete(&mut left, r);
    complete(&mut right, r);

    let mut w = ComplexMatrix::zeros(r, r);
    for (p, q) in left.iter().zip(&right) {
        for i in 0..r {
            for j in 0..r {
                w[(i, j)] += p[i] * q[j].conj();
            }
        }
    }
    w
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Two passes of modified Gram–Schmidt against `basis`, then normalization.
/// `None` when too little of `v` survives.
fn orthogonalize(v: &[C64], basis: &[Vec<C64>]) -> Option<Vec<C64>> {
    let original = norm(v);
    if original == 0.0 {
        return None;
    }
    let mut u = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let n = norm(&u);
    (n > 1e-6 * original).then(|| u.iter().map(|z| z / n).collect())
}

/// Extends an orthonormal family to a basis of `C^dim` using standard basis vectors.
fn complete(basis: &mut Vec<Vec<C64>>, dim: usize) {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..dim {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[k] = C64::new(1.0, 0.0);
            let mut u = e.clone();
            for _ in 0..2 {
                for b in basis.iter() {
                    let c = dot(b, &u);
                    for (x, y) in u.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let n = norm(&u);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
                best = Some((n, u));
            }
        }
        let (n, u) = best.expect("dimension is positive");
        basis.push(u.iter().map(|z| z / n).collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity() {
        let i = ComplexMatrix::identity(3);
        let w = procrustes_unitary(&i, &i);
        assert!(w.distance(&i) < 1e-12);
    }

    #[test]
    fn zero_input_still_unitary() {
        let z = ComplexMatrix::zeros(4, 2);
        let w = procrustes_unitary(&z, &z);
        assert!(w.unitarity_defect() < 1e-12);
    }

    #[test]
    fn rank_deficient_completion_is_unitary() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let w = procrustes_unitary(&a, &b);
        assert!(w.unitarity_defect() < 1e-12);
        assert!(a.matmul(&w).distance(&b) < 1e-12);
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let u = ComplexMatrix::from_fn(2, 2, |i, j| {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            match (i, j) {
                (0, 0) => C64::new(s, 0.0),
                (0, 1) => C64::new(0.0, s),
                (1, 0) => C64::new(0.0, s),
                _ => C64::new(s, 0.0),
            }
        });
        let w = polar_unitary(&u.scale_real(3.0));
        assert!(w.distance(&u) < 1e-12);
    }
}
