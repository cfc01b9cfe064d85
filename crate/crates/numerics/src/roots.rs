//! Durand–Kerner (Weierstrass) simultaneous root iteration.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{NumericsError, Result};

const MAX_ITERATIONS: usize = 500;
const MAX_RESTARTS: usize = 6;

/// Horner evaluation; `coeffs` are ordered low to high degree.
pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn poly_eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Monic polynomial with the given roots, low to high degree.
pub fn poly_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// `Σ |c_k|·|z|^k`, the natural size against which `|p(z)|` is judged.
fn eval_scale(coeffs: &[C64], z: C64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// All roots of `Σ c_k z^k` (multiset of size `deg`).
///
/// The leading coefficient must exceed `1e−14·max|c_k|`. Iteration is
/// capped at 500 steps per attempt; attempts whose residual is not small
/// are restarted from randomly perturbed starting points with a fixed seed,
/// so results are deterministic.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = coeffs.last().map_or(0.0, |c| c.norm());
    if coeffs.len() < 2 {
        return if lead > 0.0 { Ok(vec![]) } else { Err(NumericsError::DegenerateLeadingCoefficient) };
    }
    if lead.is_nan() || lead <= 1e-14 * max {
        return Err(NumericsError::DegenerateLeadingCoefficient);
    }
    let degree = coeffs.len() - 1;
    let leading = coeffs[degree];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / leading).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Initial radius: geometric mean of root moduli when available.
    let radius = {
        let a0 = monic[0].norm();
        if a0 > 0.0 {
            a0.powf(1.0 / degree as f64)
        } else {
            1.0
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_d0e5);
    let mut best: Option<(f64, Vec<C64>)> = None;
    for attempt in 0..=MAX_RESTARTS {
        let mut z: Vec<C64> = (0..degree)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
                let jitter = if attempt == 0 { 1.0 } else { rng.gen_range(0.5..1.5) };
                let extra = if attempt == 0 { 0.0 } else { rng.gen_range(-0.3..0.3) };
                C64::from_polar(radius * jitter, angle + extra)
            })
            .collect();
        iterate(&monic, &mut z);
        polish(&monic, &mut z);
        let worst = z
            .iter()
            .map(|&r| poly_eval(&monic, r).norm() / eval_scale(&monic, r).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, z));
        }
        if worst <= 1e-10 {
            break;
        }
    }
    Ok(best.expect("at least one attempt").1)
}

fn iterate(monic: &[C64], z: &mut [C64]) {
    let n = z.len();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let zi = z[i];
            let mut denom = C64::new(1.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if i != j {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                denom = C64::new(1e-300, 0.0);
            }
            let step = poly_eval(monic, zi) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = zi - step;
                max_step = max_step.max(step.norm() / zi.norm().max(1.0));
            }
        }
        if max_step <= 1e-15 {
            break;
        }
    }
}

/// A few Newton steps per root, each kept only if it reduces `|p|`.
fn polish(monic: &[C64], z: &mut [C64]) {
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly_eval_with_derivative(monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let candidate = *r - p / dp;
            if poly_eval(monic, candidate).norm() < p.norm() {
                *r = candidate;
            } else {
                break;
            }
        }
    }
}
