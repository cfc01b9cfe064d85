//! The Toeplitz/Fejér–Riesz pairing, induced maps, the Choi-type
//! complete-positivity test, truncation and embedding.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use tcone_numerics::{cis, cjson, hermitian_eigendecompose, psd_check, ComplexMatrix, C64};

use crate::fejer_riesz::TrigPoly;
use crate::optimize::{golden_section, periodic_local_minima};
use crate::separability::BlockToeplitz;
use crate::tensor::{TensorCoeffs, TensorKind};
use crate::toeplitz::{caratheodory_decompose, pure_toeplitz_unchecked, r_basis, ToeplitzMatrix};
use crate::{Error, Result};

const ADJOINT_TOL: f64 = 1e-12;
const CHOI_GRID: usize = 1024;
const POSITIVE_MAP_GRID: usize = 720;

/// `Σ_k τ_{−k} f̂(k)`.
pub fn pair(t: &ToeplitzMatrix, f: &TrigPoly) -> Result<C64> {
    if t.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: f.n() });
    }
    let n = t.n() as i64;
    Ok((-n + 1..n).map(|k| t.coeff(-k) * f.coeff(k)).sum())
}

/// Linear functional on `C(S¹)₍ₙ₎` given by its values `φ(χ_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrFunctional {
    pub n: usize,
    #[serde(with = "cjson::vec")]
    pub values: Vec<C64>,
}

impl FrFunctional {
    pub fn value(&self, k: i64) -> C64 {
        self.values[(k + self.n as i64 - 1) as usize]
    }

    pub fn apply(&self, f: &TrigPoly) -> Result<C64> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: f.n() });
        }
        let n = self.n as i64;
        Ok((-n + 1..n).map(|k| self.value(k) * f.coeff(k)).sum())
    }
}

/// `φ_T(χ_k) = τ_{−k}`.
pub fn functional_from_toeplitz(t: &ToeplitzMatrix) -> FrFunctional {
    let n = t.n() as i64;
    FrFunctional { n: t.n(), values: (-n + 1..n).map(|k| t.coeff(-k)).collect() }
}

pub fn toeplitz_from_functional(phi: &FrFunctional) -> Result<ToeplitzMatrix> {
    if phi.values.len() != 2 * phi.n - 1 {
        return Err(Error::DimensionMismatch { expected: 2 * phi.n - 1, found: phi.values.len() });
    }
    let n = phi.n as i64;
    ToeplitzMatrix::new(phi.n, (-n + 1..n).map(|l| phi.value(-l)).collect())
}

/// `x̂(f) = Σ_ℓ f̂(−ℓ) a_ℓ`.
pub fn hat_map(x: &BlockToeplitz, f: &TrigPoly) -> Result<ComplexMatrix> {
    if x.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: x.n(), found: f.n() });
    }
    let n = x.n() as i64;
    Ok((-n + 1..n).fold(ComplexMatrix::zeros(x.m(), x.m()), |acc, l| &acc + &x.block(l).scale(f.coeff(-l))))
}

/// Images `φ(χ_ℓ)`, `ℓ = −n+1, …, n−1`, tagged by codomain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "codomain", content = "images", rename_all = "snake_case")]
pub enum MapImages {
    Toeplitz(Vec<ToeplitzMatrix>),
    Dense(Vec<ComplexMatrix>),
    Trigpoly(Vec<TrigPoly>),
}

/// Linear map out of `C(S¹)₍ₙ₎`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct FrLinearMap {
    n: usize,
    images: MapImages,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    n: usize,
    #[serde(flatten)]
    images: MapImages,
}

impl TryFrom<MapRepr> for FrLinearMap {
    type Error = Error;

    fn try_from(r: MapRepr) -> Result<Self> {
        FrLinearMap::new(r.n, r.images)
    }
}

impl From<FrLinearMap> for MapRepr {
    fn from(m: FrLinearMap) -> Self {
        MapRepr { n: m.n, images: m.images }
    }
}

impl FrLinearMap {
    pub fn new(n: usize, images: MapImages) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("band limit must be at least 1".into()));
        }
        let (len, uniform) = match &images {
            MapImages::Toeplitz(v) => (v.len(), v.windows(2).all(|w| w[0].n() == w[1].n())),
            MapImages::Dense(v) => {
                (v.len(), v.iter().all(|a| a.is_square()) && v.windows(2).all(|w| w[0].rows() == w[1].rows()))
            }
            MapImages::Trigpoly(v) => (v.len(), v.windows(2).all(|w| w[0].n() == w[1].n())),
        };
        if len != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: len });
        }
        if !uniform {
            return Err(Error::InvalidArgument("images must share one codomain size".into()));
        }
        Ok(FrLinearMap { n, images })
    }

    /// `φ(χ_ℓ) = r_ℓ`.
    pub fn canonical(n: usize) -> Result<Self> {
        let images = (-(n as i64) + 1..n as i64).map(|l| r_basis(n, l)).collect::<Result<_>>()?;
        Self::new(n, MapImages::Toeplitz(images))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &MapImages {
        &self.images
    }

    fn index(&self, l: i64) -> usize {
        (l + self.n as i64 - 1) as usize
    }

    /// Dense image `φ(χ_ℓ)`; trigonometric images are not matrices.
    pub fn dense_image(&self, l: i64) -> Option<ComplexMatrix> {
        match &self.images {
            MapImages::Toeplitz(v) => Some(v[self.index(l)].dense()),
            MapImages::Dense(v) => Some(v[self.index(l)].clone()),
            MapImages::Trigpoly(_) => None,
        }
    }

    /// `max_ℓ ‖φ(χ_{−ℓ}) − φ(χ_ℓ)*‖`.
    pub fn adjoint_defect(&self) -> f64 {
        let n = self.n as i64;
        match &self.images {
            MapImages::Trigpoly(v) => (-n + 1..n)
                .map(|l| {
                    let (a, b) = (&v[self.index(-l)], &v[self.index(l)]);
                    let p = a.n() as i64;
                    (-p + 1..p).map(|k| (a.coeff(k) - b.coeff(-k).conj()).norm()).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max),
            _ => (-n + 1..n)
                .map(|l| {
                    let a = self.dense_image(-l).expect("matrix codomain");
                    let b = self.dense_image(l).expect("matrix codomain");
                    a.distance(&b.adjoint())
                })
                .fold(0.0, f64::max),
        }
    }

    pub fn is_adjoint_preserving(&self) -> bool {
        self.adjoint_defect() <= ADJOINT_TOL
    }

    /// Pointwise sum of two maps with the same codomain.
    pub fn add(&self, other: &FrLinearMap) -> Result<FrLinearMap> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let images = match (&self.images, &other.images) {
            (MapImages::Toeplitz(a), MapImages::Toeplitz(b)) => {
                MapImages::Toeplitz(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            (MapImages::Dense(a), MapImages::Dense(b)) => MapImages::Dense(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (MapImages::Trigpoly(a), MapImages::Trigpoly(b)) => MapImages::Trigpoly(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| TrigPoly::from_fn(x.n(), |k| x.coeff(k) + y.coeff(k)))
                    .collect(),
            ),
            _ => return Err(Error::InvalidArgument("codomains differ".into())),
        };
        FrLinearMap::new(self.n, images)
    }
}

/// `Σ_ℓ r_ℓ ⊗ φ(χ_ℓ)` for a matrix-valued map.
pub fn choi_block(phi: &FrLinearMap) -> Result<ComplexMatrix> {
    if !phi.is_adjoint_preserving() {
        return Err(Error::NotAdjointPreserving { defect: phi.adjoint_defect() });
    }
    if matches!(phi.images, MapImages::Trigpoly(_)) {
        return Err(Error::InvalidArgument("trigonometric codomain: use choi_block_at".into()));
    }
    let n = phi.n as i64;
    let p = phi.dense_image(0).expect("matrix codomain").rows();
    let mut out = ComplexMatrix::zeros(phi.n * p, phi.n * p);
    for l in -n + 1..n {
        let term = r_basis(phi.n, l)?.dense().kron(&phi.dense_image(l).expect("matrix codomain"));
        out = &out + &term;
    }
    Ok(out)
}

/// The matrix-valued Choi block of a map into trigonometric polynomials,
/// evaluated at `z = e^{iθ}`.
pub fn choi_block_at(phi: &FrLinearMap, theta: f64) -> Result<ComplexMatrix> {
    let MapImages::Trigpoly(images) = &phi.images else {
        return choi_block(phi);
    };
    let n = phi.n as i64;
    Ok(ComplexMatrix::from_fn(phi.n, phi.n, |i, j| {
        let l = i as i64 - j as i64;
        images[(l + n - 1) as usize].eval_angle(theta).0
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
    /// unit eigenvector for the smallest eigenvalue
    #[serde(with = "cjson::vec")]
    pub violating_vector: Vec<C64>,
    /// angle of the worst grid point for trigonometric codomains
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub argmin_angle: Option<f64>,
}

/// Complete positivity through positivity of the Choi block; trigonometric
/// codomains are checked at 1024 points of the circle.
pub fn cp_test(phi: &FrLinearMap, tol: f64) -> Result<CpReport> {
    if !phi.is_adjoint_preserving() {
        return Err(Error::NotAdjointPreserving { defect: phi.adjoint_defect() });
    }
    let (block, argmin_angle) = match &phi.images {
        MapImages::Trigpoly(_) => {
            let mut worst: Option<(f64, f64)> = None;
            for i in 0..CHOI_GRID {
                let theta = TAU * i as f64 / CHOI_GRID as f64;
                let e = hermitian_eigendecompose(&choi_block_at(phi, theta)?.hermitian_part())?.min_eigenvalue();
                if worst.is_none_or(|(_, v)| e < v) {
                    worst = Some((theta, e));
                }
            }
            let theta = worst.expect("nonempty grid").0;
            (choi_block_at(phi, theta)?, Some(theta))
        }
        _ => (choi_block(phi)?, None),
    };
    let eig = hermitian_eigendecompose(&block.hermitian_part())?;
    let min_eigenvalue = eig.min_eigenvalue();
    Ok(CpReport {
        completely_positive: psd_check(&block.hermitian_part(), tol)?.passes,
        min_eigenvalue,
        violating_vector: eig.vector(0),
        argmin_angle,
    })
}

/// Linear map out of `C(S¹)⁽ⁿ⁾` given by its images `φ(r_ℓ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzDomainMap {
    pub n: usize,
    pub images: Vec<ComplexMatrix>,
}

impl ToeplitzDomainMap {
    pub fn new(n: usize, images: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 || images.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n.max(1) - 1, found: images.len() });
        }
        let p = images[0].rows();
        if images.iter().any(|a| a.rows() != p || a.cols() != p) {
            return Err(Error::InvalidArgument("images must be square of one size".into()));
        }
        Ok(ToeplitzDomainMap { n, images })
    }

    pub fn image(&self, l: i64) -> &ComplexMatrix {
        &self.images[(l + self.n as i64 - 1) as usize]
    }

    pub fn adjoint_defect(&self) -> f64 {
        let n = self.n as i64;
        (-n + 1..n).map(|l| self.image(-l).distance(&self.image(l).adjoint())).fold(0.0, f64::max)
    }

    pub fn apply(&self, t: &ToeplitzMatrix) -> Result<ComplexMatrix> {
        if t.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: t.n() });
        }
        let n = self.n as i64;
        let p = self.images[0].rows();
        Ok((-n + 1..n).fold(ComplexMatrix::zeros(p, p), |acc, l| &acc + &self.image(l).scale(t.coeff(l))))
    }

    fn min_eig_at(&self, theta: f64) -> f64 {
        let t = pure_toeplitz_unchecked(self.n, cis(theta));
        let image = self.apply(&t).expect("matching size").hermitian_part();
        hermitian_eigendecompose(&image).map(|e| e.min_eigenvalue()).unwrap_or(f64::NEG_INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositiveMapReport {
    pub positive: bool,
    pub min_eigenvalue: f64,
    #[serde(with = "cjson::scalar")]
    pub argmin: C64,
}

/// Positivity on the extremal inputs `T_n(λ)`: a `grid`-point scan of the
/// circle followed by golden-section refinement around the lowest points.
pub fn positive_map_test_toeplitz_domain(phi: &ToeplitzDomainMap, grid: usize, tol: f64) -> Result<PositiveMapReport> {
    let defect = phi.adjoint_defect();
    if defect > ADJOINT_TOL {
        return Err(Error::NotAdjointPreserving { defect });
    }
    let grid = if grid == 0 { POSITIVE_MAP_GRID } else { grid };
    let step = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|i| phi.min_eig_at(step * i as f64)).collect();
    let mut best = (0.0, f64::INFINITY);
    for i in periodic_local_minima(&values, 4) {
        let centre = step * i as f64;
        let (theta, v) = golden_section(|t| phi.min_eig_at(t), centre - step, centre + step, 60);
        let candidate = if v < values[i] { (theta, v) } else { (centre, values[i]) };
        if candidate.1 < best.1 {
            best = candidate;
        }
    }
    Ok(PositiveMapReport { positive: best.1 >= -tol, min_eigenvalue: best.1, argmin: cis(best.0) })
}

/// `ξ_n = Σ_ℓ r_ℓ ⊗ χ_{−ℓ}` in tensor coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximallyEntangled {
    pub state: TensorCoeffs,
    pub entangled: bool,
}

pub fn maximally_entangled(n: usize) -> Result<MaximallyEntangled> {
    if n < 2 {
        return Err(Error::InvalidArgument("maximally entangled element needs n >= 2".into()));
    }
    let state = TensorCoeffs::from_fn(TensorKind::ToeplitzFr, n, n, |l, k| {
        C64::new(if l == -k { 1.0 } else { 0.0 }, 0.0)
    });
    Ok(MaximallyEntangled { state, entangled: true })
}

/// Blockwise coefficient reversal `χ_ℓ ↦ χ_{−ℓ}` on the trigonometric factor.
pub fn coefficient_reversal(x: &TensorCoeffs) -> TensorCoeffs {
    x.reverse_second()
}

/// Leading `n×n` corner.
pub fn truncate(t: &ToeplitzMatrix, n: usize) -> Result<ToeplitzMatrix> {
    t.leading(n)
}

/// Zero-padding into band `m`.
pub fn embed(f: &TrigPoly, m: usize) -> Result<TrigPoly> {
    f.embed(m)
}

/// Positive extension `Σ αⱼ T_m(λⱼ)` of a positive `t = Σ αⱼ T_n(λⱼ)`.
pub fn toeplitz_extension(t: &ToeplitzMatrix, m: usize, tol: f64) -> Result<ToeplitzMatrix> {
    if m < t.n() {
        return Err(Error::IndexOutOfRange { index: m as i64, n: t.n() });
    }
    let report = psd_check(&t.dense().hermitian_part(), tol)?;
    if !report.passes || !t.is_hermitian() {
        return Err(Error::NotPositive { min_eigenvalue: report.min_eigenvalue });
    }
    let decomposition = caratheodory_decompose(t, tol)?;
    Ok(decomposition.atoms.iter().fold(ToeplitzMatrix::zeros(m), |acc, a| {
        acc.add(&pure_toeplitz_unchecked(m, a.lambda).scale(C64::new(a.weight, 0.0)))
    }))
}
