//! Dual-side tests: `sep*` membership from extremal functionals, and
//! LP-based entanglement witnesses checked over the continuum.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tcone_numerics::{cis, cjson, poly_from_roots, solve_conic_lp, ConicLpOutcome, C64};

use crate::fejer_riesz::{extremal_poly, TrigPoly};
use crate::optimize::{golden_section, periodic_local_minima};
use crate::tensor::{real_pairing, TensorCoeffs, TensorKind};
use crate::toeplitz::{check_unit, pure_toeplitz_unchecked, ToeplitzMatrix};
use crate::{Error, Result};

const SEP_STAR_BUDGET: usize = 4_000_000;
const CONTINUUM_TOL: f64 = 1e-8;
const MIN_LP_MARGIN: f64 = 1e-6;
const COLUMN_GENERATION_ROUNDS: usize = 8;
const CONTINUUM_STARTS: usize = 20;

/// `ξ` with `f_ξ(z) = Σ ξ_ℓ z^{n−1−ℓ} ∝ Π (z − rⱼ)`, `‖ξ‖₂ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualExtremalVector {
    #[serde(with = "cjson::vec")]
    pub roots: Vec<C64>,
    #[serde(with = "cjson::vec")]
    pub xi: Vec<C64>,
}

impl DualExtremalVector {
    /// `⟨t ξ, ξ⟩`.
    pub fn state(&self, t: &ToeplitzMatrix) -> Result<C64> {
        if t.n() != self.xi.len() {
            return Err(Error::DimensionMismatch { expected: self.xi.len(), found: t.n() });
        }
        Ok(moments(&self.xi).iter().enumerate().map(|(i, s)| s * t.coeff(i as i64 - t.n() as i64 + 1)).sum())
    }
}

pub fn dual_extremal_vector(roots: &[C64]) -> Result<DualExtremalVector> {
    for r in roots {
        check_unit(*r)?;
    }
    Ok(DualExtremalVector { roots: roots.to_vec(), xi: xi_from_roots(roots) })
}

fn xi_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut xi = poly_from_roots(roots);
    xi.reverse();
    let norm = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    xi.iter().map(|z| z / norm).collect()
}

fn xi_from_angles(angles: &[f64]) -> Vec<C64> {
    xi_from_roots(&angles.iter().map(|&t| cis(t)).collect::<Vec<_>>())
}

/// `s_ℓ = ⟨r_ℓ v, v⟩ = Σ_j v_{j−ℓ} conj(v_j)` for `ℓ = −n+1..n−1`.
fn moments(v: &[C64]) -> Vec<C64> {
    let n = v.len() as i64;
    (-n + 1..n)
        .map(|l| {
            (l.max(0)..n + l.min(0))
                .map(|j| v[(j - l) as usize] * v[j as usize].conj())
                .sum()
        })
        .collect()
}

/// Nondecreasing index tuples of length `len` over `0..grid`.
fn multisets(grid: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let start = t.last().copied().unwrap_or(0);
            for i in start..grid {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn multiset_count(grid: usize, len: usize) -> f64 {
    (0..len).map(|i| (grid + i) as f64 / (i + 1) as f64).product()
}

/// Extremal vectors realizing a `sep*` minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepStarArgmin {
    pub xi_angles: Vec<f64>,
    pub eta_angles: Vec<f64>,
    #[serde(with = "cjson::vec")]
    pub xi: Vec<C64>,
    #[serde(with = "cjson::vec")]
    pub eta: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepStarReport {
    pub member: bool,
    pub min_value: f64,
    pub argmin: SepStarArgmin,
}

/// `⟨x(ξ⊗η), ξ⊗η⟩` for the extremal vectors with the given root angles.
pub fn sep_star_value(x: &TensorCoeffs, xi_angles: &[f64], eta_angles: &[f64]) -> f64 {
    let sx = moments(&xi_angles_checked(x.n(), xi_angles));
    let sy = moments(&xi_angles_checked(x.m(), eta_angles));
    bilinear(x, &sx, &sy)
}

fn xi_angles_checked(n: usize, angles: &[f64]) -> Vec<C64> {
    assert_eq!(angles.len() + 1, n, "expected {} root angles", n - 1);
    xi_from_angles(angles)
}

fn bilinear(x: &TensorCoeffs, sx: &[C64], sy: &[C64]) -> f64 {
    let w = sy.len();
    x.as_slice().iter().enumerate().map(|(i, c)| (c * sx[i / w] * sy[i % w]).re).sum()
}

/// Minimizes `⟨x(ξ⊗η), ξ⊗η⟩` over extremal dual vectors of both factors:
/// a `grid`-point scan per root angle, then three rounds of coordinate
/// golden-section refinement. `member` is `min ≥ −tol`.
pub fn sep_star_test_toeplitz_toeplitz(x: &TensorCoeffs, grid: usize, tol: f64) -> Result<SepStarReport> {
    if x.kind() != TensorKind::ToeplitzToeplitz {
        return Err(Error::InvalidArgument("expected a Toeplitz⊗Toeplitz element".into()));
    }
    if !x.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: x.hermitian_defect() });
    }
    let (p, q) = (x.n() - 1, x.m() - 1);
    let mut g = grid.max(4);
    while g > 4 && multiset_count(g, p) * multiset_count(g, q) > SEP_STAR_BUDGET as f64 {
        g -= 1;
    }
    let step = TAU / g as f64;
    let to_angles = |t: &[usize]| t.iter().map(|&i| step * i as f64).collect::<Vec<_>>();
    let xs: Vec<Vec<f64>> = multisets(g, p).iter().map(|t| to_angles(t)).collect();
    let ys: Vec<Vec<f64>> = multisets(g, q).iter().map(|t| to_angles(t)).collect();
    let sxs: Vec<Vec<C64>> = xs.iter().map(|a| moments(&xi_from_angles(a))).collect();
    let sys: Vec<Vec<C64>> = ys.iter().map(|a| moments(&xi_from_angles(a))).collect();

    let mut scored: Vec<(f64, usize, usize)> = Vec::new();
    for (i, sx) in sxs.iter().enumerate() {
        for (j, sy) in sys.iter().enumerate() {
            scored.push((bilinear(x, sx, sy), i, j));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(5);

    let mut best = (f64::INFINITY, vec![], vec![]);
    for &(v0, i, j) in &scored {
        let mut params: Vec<f64> = xs[i].iter().chain(&ys[j]).copied().collect();
        let eval = |ps: &[f64]| sep_star_value(x, &ps[..p], &ps[p..]);
        let mut value = v0;
        let mut h = step;
        for _ in 0..3 {
            for c in 0..params.len() {
                let centre = params[c];
                let mut trial = params.clone();
                let (t, v) = golden_section(
                    |s| {
                        trial[c] = s;
                        eval(&trial)
                    },
                    centre - h,
                    centre + h,
                    50,
                );
                if v < value {
                    params[c] = t;
                    value = v;
                }
            }
            h /= 2.0;
        }
        if value < best.0 {
            best = (value, params[..p].to_vec(), params[p..].to_vec());
        }
    }
    let (min_value, xi_angles, eta_angles) = best;
    let argmin =
        SepStarArgmin { xi: xi_from_angles(&xi_angles), eta: xi_from_angles(&eta_angles), xi_angles, eta_angles };
    Ok(SepStarReport { member: min_value >= -tol, min_value, argmin })
}

/// `x = r₀⊗a + r₁⊗b + r₋₁⊗b*` in tensor coordinates.
pub fn two_by_two_coeffs(a: &ToeplitzMatrix, b: &ToeplitzMatrix) -> Result<TensorCoeffs> {
    if a.n() != 2 || b.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: if a.n() != 2 { a.n() } else { b.n() } });
    }
    Ok(TensorCoeffs::from_fn(TensorKind::ToeplitzToeplitz, 2, 2, |l, k| match l {
        0 => a.coeff(k),
        1 => b.coeff(k),
        _ => b.coeff(-k).conj(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SepStar2x2Report {
    pub member: bool,
    pub min_value: f64,
    pub argmin_theta: f64,
}

fn min_eig_2x2(h00: f64, h11: f64, h10: C64) -> f64 {
    let mean = (h00 + h11) / 2.0;
    let half_gap = (h00 - h11) / 2.0;
    mean - half_gap.hypot(h10.norm())
}

/// `min_θ λ_min(a + ½(e^{iθ}b + e^{−iθ}b*))` by a `grid`-point scan plus
/// golden-section refinement; `member` is `min ≥ −tol`.
pub fn sep_star_test_2x2(a: &ToeplitzMatrix, b: &ToeplitzMatrix, grid: usize, tol: f64) -> Result<SepStar2x2Report> {
    if a.n() != 2 || b.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: if a.n() != 2 { a.n() } else { b.n() } });
    }
    if !a.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: a.hermitian_defect() });
    }
    let (ad, bd) = (a.dense(), b.dense());
    let f = |theta: f64| {
        let e = cis(theta);
        let h = |i: usize, j: usize| ad[(i, j)] + (e * bd[(i, j)] + e.conj() * bd[(j, i)].conj()) * 0.5;
        min_eig_2x2(h(0, 0).re, h(1, 1).re, h(1, 0))
    };
    let grid = if grid == 0 { 720 } else { grid };
    let step = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|i| f(step * i as f64)).collect();
    let mut best = (0.0, f64::INFINITY);
    for i in periodic_local_minima(&values, 4) {
        let centre = step * i as f64;
        let (t, v) = golden_section(f, centre - step, centre + step, 60);
        let cand = if v < values[i] { (t.rem_euclid(TAU), v) } else { (centre, values[i]) };
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(SepStar2x2Report { member: best.1 >= -tol, min_value: best.1, argmin_theta: best.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrFrReport {
    pub member: bool,
    pub min_value: f64,
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    #[serde(with = "cjson::scalar")]
    pub mu: C64,
}

/// `F`, its gradient and Hessian in the angles `(θ, φ)`.
fn bivariate_jet(f: &TensorCoeffs, theta: f64, phi: f64) -> (f64, [f64; 2], [[f64; 3]; 1]) {
    let (mut v, mut gt, mut gp, mut htt, mut htp, mut hpp) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for l in f.l_range() {
        for k in f.k_range() {
            let z = f.get(l, k) * cis(l as f64 * theta + k as f64 * phi);
            let (lf, kf) = (l as f64, k as f64);
            v += z.re;
            gt -= lf * z.im;
            gp -= kf * z.im;
            htt -= lf * lf * z.re;
            htp -= lf * kf * z.re;
            hpp -= kf * kf * z.re;
        }
    }
    (v, [gt, gp], [[htt, htp, hpp]])
}

/// Minimum of a real bivariate trigonometric polynomial over the torus:
/// `grid × grid` scan plus damped Newton steps; `member` is `min ≥ −tol`.
pub fn sep_star_test_fr_fr(f: &TensorCoeffs, grid: usize, tol: f64) -> Result<FrFrReport> {
    if !f.is_hermitian() {
        return Err(Error::NotRealValued { defect: f.hermitian_defect() });
    }
    let grid = if grid == 0 { 256 } else { grid };
    let step = TAU / grid as f64;
    let ks: Vec<i64> = f.k_range().collect();
    let mut values = vec![0.0; grid * grid];
    for i in 0..grid {
        let theta = step * i as f64;
        let g: Vec<C64> = ks
            .iter()
            .map(|&k| f.l_range().map(|l| f.get(l, k) * cis(l as f64 * theta)).sum())
            .collect();
        for j in 0..grid {
            let phi = step * j as f64;
            values[i * grid + j] = ks.iter().zip(&g).map(|(&k, gk)| (gk * cis(k as f64 * phi)).re).sum();
        }
    }
    let mut order: Vec<usize> = (0..grid * grid).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &idx in order.iter().take(8) {
        let (mut t, mut p) = (step * (idx / grid) as f64, step * (idx % grid) as f64);
        let mut v = values[idx];
        for _ in 0..20 {
            let (_, g, [[a, b, c]]) = bivariate_jet(f, t, p);
            let det = a * c - b * b;
            let (dt, dp) = if a > 0.0 && det > 0.0 {
                ((c * g[0] - b * g[1]) / det, (a * g[1] - b * g[0]) / det)
            } else {
                (g[0] * 1e-3, g[1] * 1e-3)
            };
            let mut s = 1.0;
            let mut moved = false;
            while s > 1e-6 {
                let (nt, np) = (t - s * dt, p - s * dp);
                let nv = bivariate_jet(f, nt, np).0;
                if nv < v {
                    t = nt;
                    p = np;
                    v = nv;
                    moved = true;
                    break;
                }
                s /= 2.0;
            }
            if !moved {
                break;
            }
        }
        if v < best.0 {
            best = (v, t, p);
        }
    }
    Ok(FrFrReport { member: best.0 >= -tol, min_value: best.0, lambda: cis(best.1), mu: cis(best.2) })
}

/// `T_n` in `C⁽ⁿ⁾ ⊗ C(S¹)₍ₙ₎`: `c_{ℓℓ} = 1`.
pub fn universal_toeplitz(n: usize) -> TensorCoeffs {
    TensorCoeffs::from_fn(TensorKind::ToeplitzFr, n, n, |l, k| C64::new(if l == k { 1.0 } else { 0.0 }, 0.0))
}

/// Grid sizes for [`entanglement_certify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    pub lambda_grid: usize,
    pub root_grid: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { lambda_grid: 48, root_grid: 24, seed: 0, tol: 1e-9 }
    }
}

/// Generator `T_n(λ) ⊗ f` with `f` extremal (`root_angles`) or constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessArgmin {
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    pub root_angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub n: usize,
    pub m: usize,
    pub functional: Vec<f64>,
    /// `−⟨y, x⟩ / ‖x‖`
    pub lp_margin: f64,
    /// minimum of `⟨y, T_n(λ) ⊗ f⟩` over normalized extremal `f`
    pub continuum_min: f64,
    pub argmin: WitnessArgmin,
    pub valid: bool,
    pub target_hash: String,
    pub target: Vec<f64>,
    pub seed: u64,
}

/// Outcome of re-checking a certificate from its own contents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reverification {
    pub hash_matches: bool,
    pub pairing: f64,
    pub margin_holds: bool,
    pub continuum_min: f64,
    pub continuum_holds: bool,
    pub valid: bool,
}

impl WitnessCertificate {
    /// Recomputes the hash, the target pairing and the continuum minimum.
    pub fn reverify(&self) -> Reverification {
        let hash_matches = target_hash(self.n, self.m, &self.target) == self.target_hash;
        let norm = self.target.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let pairing = real_pairing(&self.functional, &self.target);
        let margin_holds = self.lp_margin > 0.0 && pairing / norm <= -self.lp_margin + 1e-12;
        let (continuum_min, _) = continuum_minimum(&self.functional, self.n, self.m, self.seed);
        let continuum_holds = continuum_min >= -CONTINUUM_TOL;
        Reverification {
            hash_matches,
            pairing,
            margin_holds,
            continuum_min,
            continuum_holds,
            valid: hash_matches && margin_holds && continuum_holds,
        }
    }
}

/// Term `weight · T_n(λ) ⊗ f` of a separable decomposition; `f` is constant
/// when `root_angles` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableTerm {
    pub weight: f64,
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    pub root_angles: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Separable { terms: Vec<SeparableTerm>, residual: f64 },
    Entangled { certificate: WitnessCertificate },
    Unknown { certificate: WitnessCertificate },
}

pub fn target_hash(n: usize, m: usize, coords: &[f64]) -> String {
    let mut h = Sha256::new();
    h.update((n as u64).to_le_bytes());
    h.update((m as u64).to_le_bytes());
    for v in coords {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn second_factor(m: usize, roots: Option<&[f64]>) -> TrigPoly {
    match roots {
        Some(r) => extremal_poly(m, r),
        None => TrigPoly::monomial(m, 0).expect("band at least 1"),
    }
}

fn generator_coords(n: usize, m: usize, lambda: C64, roots: Option<&[f64]>) -> Vec<f64> {
    let t = pure_toeplitz_unchecked(n, lambda);
    TensorCoeffs::product(TensorKind::ToeplitzFr, t.coeffs(), second_factor(m, roots).coeffs(), 1.0).real_coords()
}

fn generator_value(y: &[f64], n: usize, m: usize, params: &[f64]) -> f64 {
    real_pairing(y, &generator_coords(n, m, cis(params[0]), Some(&params[1..])))
}

/// Coordinate golden-section descent with shrinking brackets.
fn coordinate_descent(f: &impl Fn(&[f64]) -> f64, start: &[f64], h0: f64, rounds: usize) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    let mut v = f(&x);
    let mut h = h0;
    for _ in 0..rounds {
        for c in 0..x.len() {
            let centre = x[c];
            let mut trial = x.clone();
            let (t, tv) = golden_section(
                |s| {
                    trial[c] = s;
                    f(&trial)
                },
                centre - h,
                centre + h,
                40,
            );
            if tv < v {
                x[c] = t;
                v = tv;
            }
        }
        h /= 2.0;
    }
    (x, v)
}

/// Minimum of `(λ, θ₁..θ_{m−1}) ↦ ⟨y, T_n(λ) ⊗ f_θ⟩`: a fine grid seeds
/// twenty coordinate-descent starts, half of them random.
fn continuum_minimum(y: &[f64], n: usize, m: usize, seed: u64) -> (f64, Vec<f64>) {
    let f = |p: &[f64]| generator_value(y, n, m, p);
    let q = m - 1;
    let lambda_grid = 96;
    let mut root_grid = 48;
    while root_grid > 8 && lambda_grid as f64 * multiset_count(root_grid, q) > 250_000.0 {
        root_grid -= 4;
    }
    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    let tuples = multisets(root_grid, q);
    for i in 0..lambda_grid {
        let phi = TAU * i as f64 / lambda_grid as f64;
        for t in &tuples {
            let mut p = vec![phi];
            p.extend(t.iter().map(|&j| TAU * j as f64 / root_grid as f64));
            seeds.push((f(&p), p));
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    seeds.truncate(CONTINUUM_STARTS / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while seeds.len() < CONTINUUM_STARTS {
        let p: Vec<f64> = (0..=q).map(|_| rng.gen_range(-PI..PI)).collect();
        seeds.push((f(&p), p));
    }
    let mut best = (f64::INFINITY, vec![]);
    for (_, start) in &seeds {
        let (x, v) = coordinate_descent(&f, start, TAU / lambda_grid as f64 * 2.0, 10);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}

/// `λ` and optional root angles of a generator `T_n(λ) ⊗ f`.
type GeneratorLabel = (C64, Option<Vec<f64>>);

fn grid_generators(n: usize, m: usize, opts: &WitnessOptions) -> (Vec<Vec<f64>>, Vec<GeneratorLabel>) {
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    let tuples = multisets(opts.root_grid, m - 1);
    for i in 0..opts.lambda_grid {
        let lambda = cis(TAU * i as f64 / opts.lambda_grid as f64);
        if m > 1 {
            coords.push(generator_coords(n, m, lambda, None));
            labels.push((lambda, None));
        }
        for t in &tuples {
            let angles: Vec<f64> = t.iter().map(|&j| TAU * j as f64 / opts.root_grid as f64).collect();
            coords.push(generator_coords(n, m, lambda, Some(&angles)));
            labels.push((lambda, Some(angles)));
        }
    }
    (coords, labels)
}

/// Inner LP over `T_n(λᵢ) ⊗ f_j` on grids, then continuum verification of
/// the Farkas functional, with column generation and a final shift along
/// `c₀₀` when the continuum minimum dips below zero.
pub fn entanglement_certify(x: &TensorCoeffs, opts: &WitnessOptions) -> Result<CertifyOutcome> {
    if x.kind() != TensorKind::ToeplitzFr {
        return Err(Error::InvalidArgument("expected a Toeplitz⊗Fejér–Riesz element".into()));
    }
    if !x.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: x.hermitian_defect() });
    }
    if opts.lambda_grid == 0 || opts.root_grid == 0 {
        return Err(Error::InvalidArgument("grid sizes must be positive".into()));
    }
    let (n, m) = (x.n(), x.m());
    let target = x.real_coords();
    let x_norm = target.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let (mut generators, mut labels) = grid_generators(n, m, opts);

    let mut round = 0;
    let (mut y, mut cmin, mut argmin) = loop {
        match solve_conic_lp(&generators, &target, opts.tol)? {
            ConicLpOutcome::Feasible { weights, residual } => {
                let terms = weights
                    .iter()
                    .zip(&labels)
                    .filter(|(w, _)| **w > 0.0)
                    .map(|(w, (lambda, roots))| SeparableTerm { weight: *w, lambda: *lambda, root_angles: roots.clone() })
                    .collect();
                return Ok(CertifyOutcome::Separable { terms, residual });
            }
            ConicLpOutcome::Infeasible { farkas, .. } => {
                let (cmin, argmin) = continuum_minimum(&farkas, n, m, opts.seed);
                if cmin >= -CONTINUUM_TOL || round == COLUMN_GENERATION_ROUNDS || m == 1 {
                    break (farkas, cmin, argmin);
                }
                generators.push(generator_coords(n, m, cis(argmin[0]), Some(&argmin[1..])));
                labels.push((cis(argmin[0]), Some(argmin[1..].to_vec())));
                round += 1;
            }
        }
    };

    if cmin < -CONTINUUM_TOL {
        y[0] -= cmin - 1e-10;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        (cmin, argmin) = continuum_minimum(&y, n, m, opts.seed);
    }
    let lp_margin = -real_pairing(&y, &target) / x_norm;
    let valid = cmin >= -CONTINUUM_TOL && lp_margin >= MIN_LP_MARGIN;
    let certificate = WitnessCertificate {
        n,
        m,
        functional: y,
        lp_margin,
        continuum_min: cmin,
        argmin: WitnessArgmin { lambda: cis(argmin[0]), root_angles: argmin[1..].to_vec() },
        valid,
        target_hash: target_hash(n, m, &target),
        target,
        seed: opts.seed,
    };
    Ok(if valid { CertifyOutcome::Entangled { certificate } } else { CertifyOutcome::Unknown { certificate } })
}
