//! Trigonometric polynomials: evaluation, positivity on the circle,
//! spectral factorization and extremality.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use tcone_numerics::{arc_distance, cis, cjson, poly_eval, poly_from_roots, polynomial_roots, C64};

use crate::toeplitz::check_unit;
use crate::{Error, Result};

const NONNEG_GRID: usize = 1024;
const RESIDUAL_GRID: usize = 512;

/// `f(z) = Σ f̂(ℓ) z^ℓ` with `|ℓ| < n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigRepr", into = "TrigRepr")]
pub struct TrigPoly {
    n: usize,
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct TrigRepr {
    n: usize,
    #[serde(with = "cjson::vec")]
    coeffs: Vec<C64>,
}

impl TryFrom<TrigRepr> for TrigPoly {
    type Error = Error;

    fn try_from(r: TrigRepr) -> Result<Self> {
        TrigPoly::new(r.n, r.coeffs)
    }
}

impl From<TrigPoly> for TrigRepr {
    fn from(f: TrigPoly) -> Self {
        TrigRepr { n: f.n, coeffs: f.coeffs }
    }
}

impl TrigPoly {
    /// `coeffs` lists `f̂(ℓ)` for `ℓ = −n+1, …, n−1`.
    pub fn new(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("band limit must be at least 1".into()));
        }
        if coeffs.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: coeffs.len() });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(TrigPoly { n, coeffs })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(i64) -> C64) -> Self {
        assert!(n >= 1);
        let lo = -(n as i64) + 1;
        TrigPoly { n, coeffs: (0..2 * n - 1).map(|i| f(lo + i as i64)).collect() }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_| C64::new(0.0, 0.0))
    }

    /// `χ_ℓ(z) = z^ℓ` in band `n`.
    pub fn monomial(n: usize, l: i64) -> Result<Self> {
        if n == 0 || l.abs() >= n as i64 {
            return Err(Error::IndexOutOfRange { index: l, n });
        }
        Ok(Self::from_fn(n, |k| C64::new(if k == l { 1.0 } else { 0.0 }, 0.0)))
    }

    /// `|h(z)|²` for an analytic polynomial `h` of degree `< n`.
    pub fn abs_squared(h: &[C64], n: usize) -> Result<Self> {
        if h.len() > n {
            return Err(Error::DimensionMismatch { expected: n, found: h.len() });
        }
        Ok(Self::from_fn(n, |l| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, hj) in h.iter().enumerate() {
                let i = j as i64 + l;
                if i >= 0 && (i as usize) < h.len() {
                    acc += h[i as usize] * hj.conj();
                }
            }
            acc
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `f̂(ℓ)`; zero outside the band.
    pub fn coeff(&self, l: i64) -> C64 {
        let n = self.n as i64;
        if l.abs() >= n {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(l + n - 1) as usize]
        }
    }

    pub fn set_coeff(&mut self, l: i64, value: C64) {
        let n = self.n as i64;
        assert!(l.abs() < n, "Fourier index {l} out of band");
        self.coeffs[(l + n - 1) as usize] = value;
    }

    pub fn real_defect(&self) -> f64 {
        let n = self.n as i64;
        (-n + 1..n).map(|l| (self.coeff(-l) - self.coeff(l).conj()).norm()).fold(0.0, f64::max)
    }

    pub fn is_real_valued(&self) -> bool {
        let scale = self.coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        self.real_defect() <= 1e-12 * scale
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.norm() == 0.0)
    }

    /// Upper bound `Σ |f̂(ℓ)|` for `‖f‖_∞`.
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        TrigPoly { n: self.n, coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    /// `f̂(ℓ) ↦ f̂(ℓ)·μ^ℓ`.
    pub fn rotate(&self, mu: C64) -> Self {
        Self::from_fn(self.n, |l| self.coeff(l) * crate::toeplitz::powers_on_circle(mu, l))
    }

    /// Zero-padding into band `m ≥ n`.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.n {
            return Err(Error::IndexOutOfRange { index: m as i64, n: self.n });
        }
        Ok(Self::from_fn(m, |l| self.coeff(l)))
    }

    /// `f(e^{iθ})` together with first and second derivatives in `θ`.
    pub fn eval_angle(&self, theta: f64) -> (C64, C64, C64) {
        let n = self.n as i64;
        let mut f = C64::new(0.0, 0.0);
        let mut d1 = C64::new(0.0, 0.0);
        let mut d2 = C64::new(0.0, 0.0);
        for l in -n + 1..n {
            let term = self.coeff(l) * cis(l as f64 * theta);
            let lf = l as f64;
            f += term;
            d1 += term * C64::new(0.0, lf);
            d2 -= term * (lf * lf);
        }
        (f, d1, d2)
    }
}

/// `f(z)` for `|z| = 1`.
pub fn evaluate(f: &TrigPoly, z: C64) -> Result<C64> {
    check_unit(z)?;
    let n = f.n;
    let upper = poly_eval(&f.coeffs[n - 1..], z);
    let lower: Vec<C64> = std::iter::once(C64::new(0.0, 0.0)).chain(f.coeffs[..n - 1].iter().rev().copied()).collect();
    Ok(upper + poly_eval(&lower, z.conj()))
}

/// Minimum of a real trigonometric polynomial on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonnegReport {
    pub nonneg: bool,
    pub min_value: f64,
    #[serde(with = "cjson::scalar")]
    pub argmin: C64,
}

/// 1024-point scan, then three Newton steps in `θ` from the best grid
/// points; `nonneg` is `min ≥ −tol`.
pub fn is_nonneg_on_circle(f: &TrigPoly, tol: f64) -> Result<NonnegReport> {
    if !f.is_real_valued() {
        return Err(Error::NotRealValued { defect: f.real_defect() });
    }
    let (theta, min_value) = circle_minimum(f);
    Ok(NonnegReport { nonneg: min_value >= -tol, min_value, argmin: cis(theta) })
}

/// `(θ*, f(e^{iθ*}))` for the estimated global minimum.
pub(crate) fn circle_minimum(f: &TrigPoly) -> (f64, f64) {
    let values: Vec<f64> = (0..NONNEG_GRID).map(|i| f.eval_angle(TAU * i as f64 / NONNEG_GRID as f64).0.re).collect();
    // Refine every discrete local minimum among the few lowest.
    let mut candidates: Vec<usize> = (0..NONNEG_GRID)
        .filter(|&i| {
            let prev = values[(i + NONNEG_GRID - 1) % NONNEG_GRID];
            let next = values[(i + 1) % NONNEG_GRID];
            values[i] <= prev && values[i] <= next
        })
        .collect();
    candidates.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    candidates.truncate(6);
    if candidates.is_empty() {
        candidates.push(0);
    }
    let mut best = (0.0, f64::INFINITY);
    for &i in &candidates {
        let mut theta = TAU * i as f64 / NONNEG_GRID as f64;
        let mut value = values[i];
        for _ in 0..3 {
            let (_, d1, d2) = f.eval_angle(theta);
            if d2.re <= 0.0 {
                break;
            }
            let next = theta - d1.re / d2.re;
            let v = f.eval_angle(next).0.re;
            if v <= value {
                theta = next;
                value = v;
            } else {
                break;
            }
        }
        if value < best.1 {
            best = (theta.rem_euclid(TAU), value);
        }
    }
    best
}

/// `h` with `|h(z)|² = f(z)` on the circle and all roots in the closed disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFactor {
    /// coefficients of `h`, low to high degree
    #[serde(with = "cjson::vec")]
    pub h: Vec<C64>,
    /// `max | |h|² − f |` over 512 equispaced points
    pub residual: f64,
}

impl SpectralFactor {
    pub fn eval(&self, z: C64) -> C64 {
        poly_eval(&self.h, z)
    }
}

/// Largest `|ℓ|` whose coefficient is not negligible.
fn effective_degree(f: &TrigPoly) -> usize {
    let max = f.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let n = f.n as i64;
    (0..n).rev().find(|&l| f.coeff(l).norm().max(f.coeff(-l).norm()) > 1e-14 * max).unwrap_or(0) as usize
}

/// Roots of `z^d f(z)` where `d` is the effective degree.
fn laurent_roots(f: &TrigPoly, d: usize) -> Result<Vec<C64>> {
    let d = d as i64;
    let coeffs: Vec<C64> = (-d..=d).map(|l| f.coeff(l)).collect();
    Ok(polynomial_roots(&coeffs)?)
}

/// Spectral factorization by root pairing.
///
/// Roots strictly inside the disk are kept; roots within `ε` of the
/// circle are clustered in arc distance, averaged, projected to the circle
/// and kept with half their multiplicity. `ε` starts at `1e−6` and widens to
/// `1e−5`, `1e−4` when the pairing is inconsistent. `h` is scaled so that
/// `Σ |h_k|² = f̂(0)`.
pub fn fejer_riesz_factorize(f: &TrigPoly, tol: f64) -> Result<SpectralFactor> {
    let report = is_nonneg_on_circle(f, tol)?;
    if !report.nonneg {
        return Err(Error::NotNonnegative { min_value: report.min_value });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = effective_degree(f);
    let c0 = f.coeff(0).re;
    if d == 0 {
        let h = vec![C64::new(c0.max(0.0).sqrt(), 0.0)];
        let residual = factor_residual(f, &h);
        return Ok(SpectralFactor { h, residual });
    }
    let roots = laurent_roots(f, d)?;
    let sup = f.coefficient_l1().max(1.0);
    let mut last_err = String::new();
    for eps in [1e-6, 1e-5, 1e-4] {
        match pair_roots(f, &roots, d, eps) {
            Ok(kept) => {
                let mut h = poly_from_roots(&kept);
                let energy: f64 = h.iter().map(|z| z.norm_sqr()).sum();
                let s = (c0 / energy).sqrt();
                h.iter_mut().for_each(|z| *z *= s);
                let residual = factor_residual(f, &h);
                if residual <= 1e-7 * sup {
                    return Ok(SpectralFactor { h, residual });
                }
                last_err = format!("residual {residual:.3e} at clustering radius {eps:.0e}");
            }
            Err(msg) => last_err = msg,
        }
    }
    Err(Error::FactorizationUnstable(last_err))
}

fn pair_roots(f: &TrigPoly, roots: &[C64], d: usize, eps: f64) -> std::result::Result<Vec<C64>, String> {
    let mut kept: Vec<C64> = Vec::with_capacity(d);
    let mut outside = 0usize;
    let mut on_circle: Vec<C64> = Vec::new();
    for &r in roots {
        let m = r.norm();
        if (m - 1.0).abs() <= eps {
            on_circle.push(r);
        } else if m < 1.0 {
            kept.push(r);
        } else {
            outside += 1;
        }
    }
    if kept.len() != outside {
        return Err(format!("{} roots inside the disk but {} outside", kept.len(), outside));
    }
    // Greedy clustering by angle.
    on_circle.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for r in on_circle {
        match clusters.iter_mut().find(|c| c.iter().any(|&s| arc_distance(s, r) <= eps)) {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }
    for c in &clusters {
        if c.len() % 2 == 1 {
            return Err(format!("on-circle root cluster of odd size {}", c.len()));
        }
        let mean: C64 = c.iter().map(|z| z / z.norm()).sum::<C64>();
        let projected = polish_circle_root(f, (mean / mean.norm()).arg());
        kept.extend(std::iter::repeat_n(projected, c.len() / 2));
    }
    if kept.len() != d {
        return Err(format!("kept {} roots for a degree-{} factor", kept.len(), d));
    }
    Ok(kept)
}

/// Newton on `f'(θ) = 0`: an on-circle root of a nonnegative `f` is a
/// minimum, where `f'` has a root of lower multiplicity than `f`.
fn polish_circle_root(f: &TrigPoly, theta: f64) -> C64 {
    let mut theta = theta;
    let mut slope = f.eval_angle(theta).1.re.abs();
    for _ in 0..8 {
        let (_, d1, d2) = f.eval_angle(theta);
        if d2.re <= 0.0 || slope == 0.0 {
            break;
        }
        let next = theta - d1.re / d2.re;
        let next_slope = f.eval_angle(next).1.re.abs();
        if next_slope >= slope {
            break;
        }
        theta = next;
        slope = next_slope;
    }
    cis(theta)
}

fn factor_residual(f: &TrigPoly, h: &[C64]) -> f64 {
    (0..RESIDUAL_GRID)
        .map(|i| {
            let theta = TAU * i as f64 / RESIDUAL_GRID as f64;
            let z = cis(theta);
            (poly_eval(h, z).norm_sqr() - f.eval_angle(theta).0.re).abs()
        })
        .fold(0.0, f64::max)
}

/// Whether `f` spans an extremal ray of the nonnegative cone of band `n`:
/// all `2(n−1)` roots of `z^{n−1} f(z)` must lie on the circle. A root at
/// `0` or `∞` (vanishing top coefficient) makes `f` non-extremal.
pub fn extremal_test(f: &TrigPoly, tol: f64) -> Result<bool> {
    let report = is_nonneg_on_circle(f, tol)?;
    if !report.nonneg {
        return Err(Error::NotNonnegative { min_value: report.min_value });
    }
    if f.n == 1 {
        return Ok(!f.is_zero());
    }
    let d = effective_degree(f);
    if d + 1 < f.n || f.is_zero() {
        return Ok(false);
    }
    let roots = laurent_roots(f, d)?;
    Ok(roots.iter().all(|r| {
        let m = r.norm();
        m > 1e-8 && m < 1e8 && (m - 1.0).abs() <= 1e-6
    }))
}

/// `f(λ)` for real-valued `f`, the point-evaluation state.
pub fn point_functional(lambda: C64, f: &TrigPoly) -> Result<f64> {
    Ok(evaluate(f, lambda)?.re)
}

/// `φ_λ(f) = Σ f̂(−ℓ) λ^ℓ`, which equals `f(conj λ)`.
pub fn induced_functional_phi(lambda: C64, f: &TrigPoly) -> Result<C64> {
    check_unit(lambda)?;
    let n = f.n as i64;
    Ok((-n + 1..n).map(|l| f.coeff(-l) * crate::toeplitz::powers_on_circle(lambda, l)).sum())
}

/// Normalized extremal polynomial `|Π (z − e^{iθⱼ})|² / ‖·‖` with `f̂(0) = 1`.
pub fn extremal_poly(n: usize, angles: &[f64]) -> TrigPoly {
    assert!(angles.len() < n.max(1));
    let roots: Vec<C64> = angles.iter().map(|&t| cis(t)).collect();
    let h = poly_from_roots(&roots);
    let energy: f64 = h.iter().map(|z| z.norm_sqr()).sum();
    TrigPoly::abs_squared(&h, n).expect("degree below band").scale(C64::new(1.0 / energy, 0.0))
}
