//! Block Toeplitz matrices and constructive separability: the Gurvits
//! decomposition and the results built on it.

use serde::{Deserialize, Serialize};
use tcone_numerics::{
    arc_distance, cjson, hermitian_eigendecompose, normal_eigendecompose, procrustes_unitary, psd_check,
    root_of_unity, solve_conic_lp, ComplexMatrix, ConicLpOutcome, C64,
};

use crate::circulant::circulant_expectation;
use crate::tensor::{TensorCoeffs, TensorKind};
use crate::toeplitz::{averaging_projection, powers_on_circle, pure_toeplitz_unchecked, ToeplitzMatrix};
use crate::{Error, Result};

const RANK_THRESHOLD: f64 = 1e-9;
const MERGE_ARC: f64 = 1e-7;
const SNAP_DEVIATION: f64 = 1e-6;
const GRAM_TOL: f64 = 1e-6;

/// Element of `C(S¹)⁽ⁿ⁾ ⊗ M_m`: blocks `a_ℓ` (`|ℓ| < n`), with block `(j, k)`
/// of the dense form equal to `a_{j−k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockRepr", into = "BlockRepr")]
pub struct BlockToeplitz {
    n: usize,
    m: usize,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct BlockRows(#[serde(with = "cjson::nested")] Vec<Vec<C64>>);

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    n: usize,
    m: usize,
    blocks: Vec<BlockRows>,
}

impl TryFrom<BlockRepr> for BlockToeplitz {
    type Error = Error;

    fn try_from(r: BlockRepr) -> Result<Self> {
        let m = r.m;
        let mut blocks = Vec::with_capacity(r.blocks.len());
        for BlockRows(rows) in r.blocks {
            if rows.len() != m || rows.iter().any(|row| row.len() != m) {
                return Err(Error::InvalidArgument(format!("every block must be {m}x{m}")));
            }
            blocks.push(ComplexMatrix::from_vec(m, m, rows.into_iter().flatten().collect()));
        }
        BlockToeplitz::new(r.n, m, blocks)
    }
}

impl From<BlockToeplitz> for BlockRepr {
    fn from(x: BlockToeplitz) -> Self {
        let m = x.m;
        let blocks = x
            .blocks
            .iter()
            .map(|b| BlockRows((0..m).map(|i| (0..m).map(|j| b[(i, j)]).collect()).collect()))
            .collect();
        BlockRepr { n: x.n, m, blocks }
    }
}

impl BlockToeplitz {
    /// `blocks` lists `a_ℓ` for `ℓ = −n+1, …, n−1`.
    pub fn new(n: usize, m: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("block Toeplitz dimensions must be at least 1".into()));
        }
        if blocks.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: blocks.len() });
        }
        if let Some(b) = blocks.iter().find(|b| b.rows() != m || b.cols() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: b.rows().max(b.cols()) });
        }
        if blocks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("non-finite block entry".into()));
        }
        Ok(BlockToeplitz { n, m, blocks })
    }

    /// `Σ T_n(λⱼ) ⊗ bⱼ`.
    pub fn from_atoms(n: usize, m: usize, atoms: &[SepAtom]) -> Self {
        let blocks = (-(n as i64) + 1..n as i64)
            .map(|l| {
                atoms.iter().fold(ComplexMatrix::zeros(m, m), |acc, a| &acc + &a.block.scale(powers_on_circle(a.lambda, l)))
            })
            .collect();
        BlockToeplitz { n, m, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `a_ℓ`; panics when `|ℓ| ≥ n`.
    pub fn block(&self, l: i64) -> &ComplexMatrix {
        assert!(l.abs() < self.n as i64, "block index {l} out of range");
        &self.blocks[(l + self.n as i64 - 1) as usize]
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    fn l_range(&self) -> std::ops::Range<i64> {
        -(self.n as i64) + 1..self.n as i64
    }

    pub fn dense(&self) -> ComplexMatrix {
        let (n, m) = (self.n, self.m);
        ComplexMatrix::from_fn(n * m, n * m, |i, j| {
            let l = (i / m) as i64 - (j / m) as i64;
            self.block(l)[(i % m, j % m)]
        })
    }

    /// `max_ℓ ‖a_{−ℓ} − a_ℓ*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        self.l_range().map(|l| self.block(-l).distance(&self.block(l).adjoint())).fold(0.0, f64::max)
    }

    /// Frobenius norm of the dense form.
    pub fn frobenius_norm(&self) -> f64 {
        self.l_range()
            .map(|l| (self.n as i64 - l.abs()) as f64 * self.block(l).frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance of the dense forms.
    pub fn distance(&self, other: &BlockToeplitz) -> f64 {
        assert_eq!((self.n, self.m), (other.n, other.m));
        self.l_range()
            .map(|l| (self.n as i64 - l.abs()) as f64 * self.block(l).distance(other.block(l)).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Leading `k` block rows and columns.
    pub fn truncate(&self, k: usize) -> Result<BlockToeplitz> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange { index: k as i64, n: self.n });
        }
        let blocks = (-(k as i64) + 1..k as i64).map(|l| self.block(l).clone()).collect();
        BlockToeplitz::new(k, self.m, blocks)
    }
}

/// `T_n(λ) ⊗ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepAtom {
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    pub block: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub n: usize,
    pub m: usize,
    pub atoms: Vec<SepAtom>,
    /// `‖Σ T_n(λⱼ) ⊗ bⱼ − x‖_F`
    pub residual: f64,
    pub verified: bool,
    pub tolerance: f64,
    /// numerical rank of the input
    pub rank: usize,
}

impl SeparableDecomposition {
    pub fn reconstruct(&self) -> BlockToeplitz {
        BlockToeplitz::from_atoms(self.n, self.m, &self.atoms)
    }
}

/// `α · T_p(λ) ⊗ T_q(μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductAtom {
    pub weight: f64,
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    #[serde(with = "cjson::scalar")]
    pub mu: C64,
}

/// Nonnegative combination of products of pure Toeplitz atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDecomposition {
    /// size of the first factor
    pub p: usize,
    /// size of the second factor
    pub q: usize,
    pub atoms: Vec<ProductAtom>,
    pub residual: f64,
    /// order of the roots of unity, when built from them
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
}

impl ProductDecomposition {
    /// Tensor coefficients `Σ α λ^ℓ μ^k`.
    pub fn to_coeffs(&self) -> TensorCoeffs {
        let mut out = TensorCoeffs::zeros(TensorKind::ToeplitzToeplitz, self.p, self.q);
        for a in &self.atoms {
            let t = TensorCoeffs::product(
                TensorKind::ToeplitzToeplitz,
                pure_toeplitz_unchecked(self.p, a.lambda).coeffs(),
                pure_toeplitz_unchecked(self.q, a.mu).coeffs(),
                a.weight,
            );
            out = out.add(&t);
        }
        out
    }

    pub fn dense(&self) -> ComplexMatrix {
        self.to_coeffs().dense().expect("Toeplitz⊗Toeplitz")
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// Unitary `w` with `x·w ≈ y`, given `y y* = x x*`.
pub fn douglas_unitary(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if (x.rows(), x.cols()) != (y.rows(), y.cols()) {
        return Err(Error::DimensionMismatch { expected: x.rows() * x.cols(), found: y.rows() * y.cols() });
    }
    let gx = x.matmul(&x.adjoint());
    let gy = y.matmul(&y.adjoint());
    let defect = gx.distance(&gy);
    if defect > tol * gx.frobenius_norm().max(1.0) {
        return Err(Error::GramMismatch { defect });
    }
    Ok(procrustes_unitary(x, y))
}

/// Decomposes a positive block Toeplitz matrix as `Σ T_n(λⱼ) ⊗ bⱼ`.
///
/// Rank support: eigenvalues below `1e−9·λ_max` are dropped. Eigenvalues of
/// the shift unitary are snapped to the circle; a modulus error above
/// `1e−6` clears `verified`. Atoms closer than `1e−7` in arc length are
/// merged. `verified` also requires `residual ≤ tol·max(1, ‖x‖_F)` and every
/// block to pass a PSD check at `1e−9·max(1, ‖b‖_F)`.
pub fn gurvits_decompose(x: &BlockToeplitz, tol: f64) -> Result<SeparableDecomposition> {
    let (n, m) = (x.n, x.m);
    let norm = x.frobenius_norm();
    let defect = x.hermitian_defect();
    if defect > tol.max(1e-12) * norm.max(1.0) {
        return Err(Error::BlockStructureViolated { defect });
    }
    let dense = x.dense().hermitian_part();
    let eig = hermitian_eigendecompose(&dense)?;
    let lmax = eig.max_eigenvalue();
    if eig.min_eigenvalue() < -tol * lmax.max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: eig.min_eigenvalue() });
    }
    if lmax <= 0.0 {
        return Ok(SeparableDecomposition { n, m, atoms: vec![], residual: norm, verified: norm <= tol, tolerance: tol, rank: 0 });
    }
    let support: Vec<usize> = (0..n * m).filter(|&k| eig.eigenvalues[k] > RANK_THRESHOLD * lmax).collect();
    let r = support.len();
    let y = ComplexMatrix::from_fn(n * m, r, |i, j| {
        let k = support[j];
        eig.vectors[(i, k)] * eig.eigenvalues[k].sqrt()
    });
    let y0 = y.submatrix(0, m, 0, r);
    let y_upper = y.submatrix(0, (n - 1) * m, 0, r);
    let y_lower = y.submatrix(m, n * m, 0, r);
    let w = douglas_unitary(&y_upper, &y_lower, GRAM_TOL)?;
    let weig = normal_eigendecompose(&w)?;

    let mut on_circle = true;
    let mut clusters: Vec<(C64, Vec<usize>)> = Vec::new();
    for (k, &ev) in weig.eigenvalues.iter().enumerate() {
        let modulus = ev.norm();
        if (modulus - 1.0).abs() > SNAP_DEVIATION {
            on_circle = false;
        }
        let snapped = if modulus > 0.0 { ev / modulus } else { C64::new(1.0, 0.0) };
        match clusters.iter_mut().find(|(rep, _)| arc_distance(*rep, snapped) <= MERGE_ARC) {
            Some((_, members)) => members.push(k),
            None => clusters.push((snapped, vec![k])),
        }
    }

    let trace_scale = x.block(0).trace().re.abs().max(f64::MIN_POSITIVE);
    let mut atoms = Vec::with_capacity(clusters.len());
    for (_, members) in &clusters {
        let mean: C64 = members.iter().map(|&k| weig.eigenvalues[k] / weig.eigenvalues[k].norm().max(1e-300)).sum();
        let lambda = mean / mean.norm();
        let p = weig.vectors.select_columns(members);
        let y0p = y0.matmul(&p);
        let block = y0p.matmul(&y0p.adjoint()).hermitian_part();
        if block.trace().re <= 1e-15 * trace_scale {
            continue;
        }
        atoms.push(SepAtom { lambda, block });
    }
    atoms.sort_by(|a, b| a.lambda.arg().total_cmp(&b.lambda.arg()));

    let residual = BlockToeplitz::from_atoms(n, m, &atoms).distance(x);
    let atoms_psd = atoms.iter().all(|a| {
        let t = 1e-9 * a.block.frobenius_norm().max(1.0);
        psd_check(&a.block, t).map(|r| r.passes).unwrap_or(false)
    });
    let verified = on_circle && atoms_psd && residual <= tol * norm.max(1.0);
    Ok(SeparableDecomposition { n, m, atoms, residual, verified, tolerance: tol, rank: r })
}

/// `[[a, c*], [c, a]]` reshuffled into `C(S¹)⁽ⁿ⁾ ⊗ M₂` order: block `ℓ` is
/// `[[a_ℓ, conj c_{−ℓ}], [c_ℓ, a_ℓ]]`.
pub fn reshuffle_2xn(a: &ToeplitzMatrix, c: &ToeplitzMatrix) -> Result<BlockToeplitz> {
    if a.n() != c.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: c.n() });
    }
    let n = a.n() as i64;
    let blocks = (-n + 1..n)
        .map(|l| {
            ComplexMatrix::from_vec(2, 2, vec![a.coeff(l), c.coeff(-l).conj(), c.coeff(l), a.coeff(l)])
        })
        .collect();
    BlockToeplitz::new(a.n(), 2, blocks)
}

/// `[[a, c*], [c, a]]` as a `2n×2n` matrix.
pub fn two_by_n_dense(a: &ToeplitzMatrix, c: &ToeplitzMatrix) -> ComplexMatrix {
    let n = a.n();
    let (ad, cd) = (a.dense(), c.dense());
    let cs = cd.adjoint();
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let (ii, jj) = (i % n, j % n);
        match (bi, bj) {
            (0, 0) | (1, 1) => ad[(ii, jj)],
            (0, 1) => cs[(ii, jj)],
            _ => cd[(ii, jj)],
        }
    })
}

/// Tensor coefficients of `[[a, c*], [c, a]]` in the basis `r_ℓ ⊗ r_k`
/// (first factor of size 2).
fn two_by_n_coeffs(a: &ToeplitzMatrix, c: &ToeplitzMatrix) -> TensorCoeffs {
    TensorCoeffs::from_fn(TensorKind::ToeplitzToeplitz, 2, a.n(), |l, k| match l {
        0 => a.coeff(k),
        1 => c.coeff(k),
        _ => c.coeff(-k).conj(),
    })
}

fn merge_product_atoms(atoms: Vec<ProductAtom>) -> Vec<ProductAtom> {
    let mut out: Vec<ProductAtom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out
            .iter_mut()
            .find(|b| arc_distance(b.lambda, a.lambda) <= MERGE_ARC && arc_distance(b.mu, a.mu) <= MERGE_ARC)
        {
            Some(b) => b.weight += a.weight,
            None => out.push(a),
        }
    }
    out
}

/// Writes a positive `[[a, c*], [c, a]]` with Toeplitz `a`, `c` as
/// `Σ αⱼ T₂(λⱼ) ⊗ T_n(μⱼ)`.
pub fn separate_2xn(a: &ToeplitzMatrix, c: &ToeplitzMatrix, tol: f64) -> Result<ProductDecomposition> {
    let bt = reshuffle_2xn(a, c)?;
    let report = psd_check(&bt.dense().hermitian_part(), tol * bt.frobenius_norm().max(1.0))?;
    if !report.passes || bt.hermitian_defect() > 1e-9 * bt.frobenius_norm().max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: report.min_eigenvalue });
    }
    let sep = gurvits_decompose(&bt, tol)?;
    let mut atoms = Vec::new();
    for atom in &sep.atoms {
        let e = averaging_projection(&atom.block)?;
        let beta0 = e.coeff(0).re;
        let beta1 = e.coeff(1);
        let mag = beta1.norm();
        if mag > 1e-15 * beta0.abs().max(f64::MIN_POSITIVE) {
            atoms.push(ProductAtom { weight: mag, lambda: beta1 / mag, mu: atom.lambda });
        }
        let rest = (beta0 - mag) / 2.0;
        if rest > 0.0 {
            atoms.push(ProductAtom { weight: rest, lambda: C64::new(1.0, 0.0), mu: atom.lambda });
            atoms.push(ProductAtom { weight: rest, lambda: C64::new(-1.0, 0.0), mu: atom.lambda });
        }
    }
    let mut out = ProductDecomposition { p: 2, q: a.n(), atoms: merge_product_atoms(atoms), residual: 0.0, prime: None };
    out.residual = out.to_coeffs().sub(&two_by_n_coeffs(a, c)).dense_frobenius_norm();
    Ok(out)
}

/// Gurvits decomposition of a block Toeplitz matrix whose blocks lie in
/// `C^{m,θ}`, with every atom block projected back onto the circulants.
pub fn toeplitz_circulant_separate(x: &BlockToeplitz, theta: f64, tol: f64) -> Result<SeparableDecomposition> {
    let mut defect: f64 = 0.0;
    for b in &x.blocks {
        let projected = circulant_expectation(b, theta)?.dense();
        defect = defect.max(projected.distance(b) / b.frobenius_norm().max(1.0));
    }
    if defect > 1e-9 {
        return Err(Error::BlocksNotCirculant { defect });
    }
    let mut sep = gurvits_decompose(x, tol)?;
    for atom in &mut sep.atoms {
        atom.block = circulant_expectation(&atom.block, theta)?.dense().hermitian_part();
    }
    sep.residual = sep.reconstruct().distance(x);
    let atoms_psd = sep.atoms.iter().all(|a| {
        let t = 1e-9 * a.block.frobenius_norm().max(1.0);
        psd_check(&a.block, t).map(|r| r.passes).unwrap_or(false)
    });
    sep.verified = sep.verified && atoms_psd && sep.residual <= tol * x.frobenius_norm().max(1.0);
    Ok(sep)
}

/// Degree-`n` positive block Toeplitz extension of `[[x₀, x₁*], [x₁, x₀]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentExtension {
    pub extension: BlockToeplitz,
    /// `‖X₀ − x₀‖_F` and `‖X₁ − x₁‖_F` combined in quadrature
    pub corner_residual: f64,
    pub decomposition: ProductDecomposition,
}

pub fn moment_extension(x0: &ToeplitzMatrix, x1: &ToeplitzMatrix, n: usize, tol: f64) -> Result<MomentExtension> {
    if n < 2 {
        return Err(Error::InvalidArgument("extension degree must be at least 2".into()));
    }
    if !x0.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: x0.hermitian_defect() });
    }
    let decomposition = separate_2xn(x0, x1, tol)?;
    let m = x0.n();
    let blocks: Vec<ComplexMatrix> = (-(n as i64) + 1..n as i64)
        .map(|l| {
            decomposition.atoms.iter().fold(ComplexMatrix::zeros(m, m), |acc, a| {
                let t = pure_toeplitz_unchecked(m, a.mu).dense();
                &acc + &t.scale(powers_on_circle(a.lambda, l) * a.weight)
            })
        })
        .collect();
    let extension = BlockToeplitz::new(n, m, blocks)?;
    let corner_residual =
        (extension.block(0).distance(&x0.dense()).powi(2) + extension.block(1).distance(&x1.dense()).powi(2)).sqrt();
    Ok(MomentExtension { extension, corner_residual, decomposition })
}

/// Result of [`max_cone_membership`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MaxConeOutcome {
    Feasible { decomposition: ProductDecomposition },
    /// Grid LP infeasible: `farkas` separates `x` from the grid cone only.
    Unknown { farkas: Vec<f64>, grid_pairing: f64 },
}

/// Grid LP over `T_n(λᵢ) ⊗ T_m(μⱼ)` with `λ`, `μ` on `grid_n`, `grid_m`
/// equispaced points of the circle. Never claims non-membership.
pub fn max_cone_membership(x: &TensorCoeffs, grid_n: usize, grid_m: usize, tol: f64) -> Result<MaxConeOutcome> {
    if x.kind() != TensorKind::ToeplitzToeplitz {
        return Err(Error::InvalidArgument("expected a Toeplitz⊗Toeplitz element".into()));
    }
    if !x.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: x.hermitian_defect() });
    }
    if grid_n == 0 || grid_m == 0 {
        return Err(Error::InvalidArgument("grid sizes must be positive".into()));
    }
    let (n, m) = (x.n(), x.m());
    let mut generators = Vec::with_capacity(grid_n * grid_m);
    let mut labels = Vec::with_capacity(grid_n * grid_m);
    for i in 0..grid_n as i64 {
        let a: Vec<C64> = (-(n as i64) + 1..n as i64).map(|l| root_of_unity(i * l, grid_n as u64)).collect();
        for j in 0..grid_m as i64 {
            let b: Vec<C64> = (-(m as i64) + 1..m as i64).map(|k| root_of_unity(j * k, grid_m as u64)).collect();
            generators.push(TensorCoeffs::product(TensorKind::ToeplitzToeplitz, &a, &b, 1.0).real_coords());
            labels.push((root_of_unity(i, grid_n as u64), root_of_unity(j, grid_m as u64)));
        }
    }
    let target = x.real_coords();
    match solve_conic_lp(&generators, &target, tol)? {
        ConicLpOutcome::Feasible { weights, .. } => {
            let atoms = weights
                .iter()
                .zip(&labels)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, (lambda, mu))| ProductAtom { weight: *w, lambda: *lambda, mu: *mu })
                .collect();
            let mut decomposition = ProductDecomposition { p: n, q: m, atoms, residual: 0.0, prime: None };
            decomposition.residual = decomposition.to_coeffs().sub(x).dense_frobenius_norm();
            Ok(MaxConeOutcome::Feasible { decomposition })
        }
        ConicLpOutcome::Infeasible { farkas, margin } => Ok(MaxConeOutcome::Unknown { farkas, grid_pairing: -margin }),
    }
}
