//! Toeplitz matrices stored by diagonals, their rank-one atoms and the
//! Carathéodory decomposition of positive ones.

use serde::{Deserialize, Serialize};
use tcone_numerics::{cjson, psd_check, root_of_unity, ComplexMatrix, C64};

use crate::separability::{gurvits_decompose, BlockToeplitz, ProductAtom, ProductDecomposition};
use crate::tensor::{TensorCoeffs, TensorKind};
use crate::{Error, Result};

/// Modulus tolerance for inputs that must lie on the unit circle.
pub const UNIT_TOL: f64 = 1e-10;

pub(crate) fn check_unit(z: C64) -> Result<()> {
    let modulus = z.norm();
    if (modulus - 1.0).abs() > UNIT_TOL || !modulus.is_finite() {
        return Err(Error::NotUnitModulus { modulus });
    }
    Ok(())
}

/// `n×n` Toeplitz matrix with `τ_ℓ` on the `ℓ`-th subdiagonal, so that
/// entry `(j, k)` equals `τ_{j−k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ToeplitzRepr", into = "ToeplitzRepr")]
pub struct ToeplitzMatrix {
    n: usize,
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct ToeplitzRepr {
    n: usize,
    #[serde(with = "cjson::vec")]
    coeffs: Vec<C64>,
}

impl TryFrom<ToeplitzRepr> for ToeplitzMatrix {
    type Error = Error;

    fn try_from(r: ToeplitzRepr) -> Result<Self> {
        ToeplitzMatrix::new(r.n, r.coeffs)
    }
}

impl From<ToeplitzMatrix> for ToeplitzRepr {
    fn from(t: ToeplitzMatrix) -> Self {
        ToeplitzRepr { n: t.n, coeffs: t.coeffs }
    }
}

impl ToeplitzMatrix {
    /// `coeffs` lists `τ_ℓ` for `ℓ = −n+1, …, n−1`.
    pub fn new(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Toeplitz dimension must be at least 1".into()));
        }
        if coeffs.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: coeffs.len() });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(ToeplitzMatrix { n, coeffs })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        ToeplitzMatrix { n, coeffs: vec![C64::new(0.0, 0.0); 2 * n - 1] }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n);
        t.coeffs[n - 1] = C64::new(1.0, 0.0);
        t
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(i64) -> C64) -> Self {
        assert!(n >= 1);
        let lo = -(n as i64) + 1;
        ToeplitzMatrix { n, coeffs: (0..2 * n - 1).map(|i| f(lo + i as i64)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients ordered `ℓ = −n+1, …, n−1`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `τ_ℓ`; zero when `|ℓ| ≥ n`.
    pub fn coeff(&self, l: i64) -> C64 {
        let n = self.n as i64;
        if l.abs() >= n {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(l + n - 1) as usize]
        }
    }

    /// Panics when `|ℓ| ≥ n`.
    pub fn set_coeff(&mut self, l: i64, value: C64) {
        let n = self.n as i64;
        assert!(l.abs() < n, "diagonal index {l} out of range");
        self.coeffs[(l + n - 1) as usize] = value;
    }

    pub fn dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |j, k| self.coeff(j as i64 - k as i64))
    }

    /// `max_ℓ |τ_{−ℓ} − conj τ_ℓ|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n as i64;
        (-n + 1..n).map(|l| (self.coeff(-l) - self.coeff(l).conj()).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        self.hermitian_defect() <= 1e-12 * scale
    }

    /// Frobenius norm of the dense form.
    pub fn frobenius_norm(&self) -> f64 {
        let n = self.n as i64;
        (-n + 1..n).map(|l| (n - l.abs()) as f64 * self.coeff(l).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        ToeplitzMatrix { n: self.n, coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    /// Panics on a dimension mismatch.
    pub fn add(&self, other: &ToeplitzMatrix) -> Self {
        assert_eq!(self.n, other.n);
        ToeplitzMatrix { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// Leading `k×k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange { index: k as i64, n: self.n });
        }
        Ok(Self::from_fn(k, |l| self.coeff(l)))
    }
}

/// `r_ℓ`: ones on the `ℓ`-th subdiagonal, i.e. `s^ℓ` or `(s*)^{|ℓ|}`.
pub fn r_basis(n: usize, l: i64) -> Result<ToeplitzMatrix> {
    if n == 0 || l.abs() >= n as i64 {
        return Err(Error::IndexOutOfRange { index: l, n });
    }
    let mut t = ToeplitzMatrix::zeros(n);
    t.set_coeff(l, C64::new(1.0, 0.0));
    Ok(t)
}

/// `T_n(λ)` with `τ_ℓ = λ^ℓ`.
pub fn pure_toeplitz(n: usize, lambda: C64) -> Result<ToeplitzMatrix> {
    check_unit(lambda)?;
    if n == 0 {
        return Err(Error::InvalidArgument("Toeplitz dimension must be at least 1".into()));
    }
    Ok(pure_toeplitz_unchecked(n, lambda))
}

pub(crate) fn pure_toeplitz_unchecked(n: usize, lambda: C64) -> ToeplitzMatrix {
    ToeplitzMatrix::from_fn(n, |l| powers_on_circle(lambda, l))
}

/// `λ^ℓ` for unit `λ`, negative `ℓ` through conjugation.
pub(crate) fn powers_on_circle(lambda: C64, l: i64) -> C64 {
    let p = lambda.powu(l.unsigned_abs() as u32);
    if l >= 0 {
        p
    } else {
        p.conj()
    }
}

/// `E_n`: replaces every diagonal of `x` by its mean.
pub fn averaging_projection(x: &ComplexMatrix) -> Result<ToeplitzMatrix> {
    if !x.is_square() || x.rows() == 0 {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: x.cols() });
    }
    let n = x.rows();
    Ok(ToeplitzMatrix::from_fn(n, |l| {
        let len = n - l.unsigned_abs() as usize;
        let sum: C64 = (0..len)
            .map(|i| if l >= 0 { x[(i + l as usize, i)] } else { x[(i, i + (-l) as usize)] })
            .sum();
        sum / len as f64
    }))
}

/// One Carathéodory atom `weight·T_n(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryAtom {
    #[serde(with = "cjson::scalar")]
    pub lambda: C64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryDecomposition {
    pub n: usize,
    pub atoms: Vec<CaratheodoryAtom>,
    /// `‖Σ αⱼ T_n(λⱼ) − t‖_F`
    pub residual: f64,
}

impl CaratheodoryDecomposition {
    pub fn reconstruct(&self) -> ToeplitzMatrix {
        self.atoms.iter().fold(ToeplitzMatrix::zeros(self.n), |acc, a| {
            acc.add(&pure_toeplitz_unchecked(self.n, a.lambda).scale(C64::new(a.weight, 0.0)))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// Writes a positive Toeplitz matrix as `Σ αⱼ T_n(λⱼ)` with at most
/// `rank(t)` atoms, using the scalar-block case of the Gurvits algorithm.
pub fn caratheodory_decompose(t: &ToeplitzMatrix, tol: f64) -> Result<CaratheodoryDecomposition> {
    if !t.is_hermitian() {
        return Err(Error::BlockStructureViolated { defect: t.hermitian_defect() });
    }
    let report = psd_check(&t.dense(), tol)?;
    if !report.passes {
        return Err(Error::NotPositive { min_eigenvalue: report.min_eigenvalue });
    }
    let blocks = t.coeffs.iter().map(|z| ComplexMatrix::from_vec(1, 1, vec![*z])).collect();
    let bt = BlockToeplitz::new(t.n, 1, blocks)?;
    let sep = gurvits_decompose(&bt, tol)?;
    let atoms = sep
        .atoms
        .iter()
        .map(|a| CaratheodoryAtom { lambda: a.lambda, weight: a.block[(0, 0)].re.max(0.0) })
        .collect();
    let mut out = CaratheodoryDecomposition { n: t.n, atoms, residual: 0.0 };
    out.residual = out.reconstruct().add(&t.scale(C64::new(-1.0, 0.0))).frobenius_norm();
    Ok(out)
}

/// Outcome of [`conv_hull_membership`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvHullReport {
    pub member: bool,
    pub min_eigenvalue: f64,
    pub decomposition: Option<CaratheodoryDecomposition>,
}

/// The Toeplitz matrix `x(ξ)` with `τ₀ = 1` and `τ_k = ξ_k` for `k ≥ 1`.
pub fn moment_matrix(xi: &[C64]) -> ToeplitzMatrix {
    let n = xi.len() + 1;
    ToeplitzMatrix::from_fn(n, |l| match l {
        0 => C64::new(1.0, 0.0),
        l if l > 0 => xi[l as usize - 1],
        l => xi[(-l) as usize - 1].conj(),
    })
}

/// Decides whether `ξ` lies in the convex hull of the moment curve
/// `{(λ, λ², …, λ^{n−1}) : |λ| = 1}`; members come with convex weights.
pub fn conv_hull_membership(xi: &[C64], tol: f64) -> Result<ConvHullReport> {
    let x = moment_matrix(xi);
    let report = psd_check(&x.dense(), tol)?;
    if !report.passes {
        return Ok(ConvHullReport { member: false, min_eigenvalue: report.min_eigenvalue, decomposition: None });
    }
    let decomposition = caratheodory_decompose(&x, tol)?;
    Ok(ConvHullReport { member: true, min_eigenvalue: report.min_eigenvalue, decomposition: Some(decomposition) })
}

/// `R_n = Σ_ℓ r_ℓ ⊗ r_ℓ` as a block Toeplitz matrix with blocks `r_ℓ`.
pub fn r_matrix(n: usize) -> Result<BlockToeplitz> {
    if n < 2 {
        return Err(Error::InvalidArgument("R_n needs n ≥ 2".into()));
    }
    let blocks = (-(n as i64) + 1..n as i64).map(|l| r_basis(n, l).map(|r| r.dense())).collect::<Result<_>>()?;
    BlockToeplitz::new(n, n, blocks)
}

/// `R_n` in tensor coordinates: `c_{ℓk} = δ_{ℓk}`.
pub fn r_matrix_coeffs(n: usize) -> TensorCoeffs {
    TensorCoeffs::from_fn(TensorKind::ToeplitzToeplitz, n, n, |l, k| C64::new(if l == k { 1.0 } else { 0.0 }, 0.0))
}

pub fn smallest_prime_above(k: u64) -> u64 {
    let is_prime = |p: u64| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    (k + 1..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// `R_n = (1/q) Σ_{j=1}^{q} T_n(λ^j) ⊗ T_n(λ^{−j})` with `q` the smallest
/// prime above `2n` and `λ = e^{2πi/q}`.
pub fn r_n_separable_decomposition(n: usize) -> Result<ProductDecomposition> {
    if n < 2 {
        return Err(Error::InvalidArgument("R_n needs n ≥ 2".into()));
    }
    let q = smallest_prime_above(2 * n as u64);
    let weight = 1.0 / q as f64;
    let atoms: Vec<ProductAtom> = (1..=q as i64)
        .map(|j| ProductAtom { weight, lambda: root_of_unity(j, q), mu: root_of_unity(-j, q) })
        .collect();
    let coeffs = TensorCoeffs::from_fn(TensorKind::ToeplitzToeplitz, n, n, |l, k| {
        (1..=q as i64).map(|j| root_of_unity(j * l - j * k, q)).sum::<C64>() * weight
    });
    let residual = coeffs.sub(&r_matrix_coeffs(n)).dense_frobenius_norm();
    Ok(ProductDecomposition { p: n, q: n, atoms, residual, prime: Some(q) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn r_basis_shapes() {
        assert_eq!(r_basis(2, 0).unwrap().dense(), ComplexMatrix::identity(2));
        let s = r_basis(3, 1).unwrap().dense();
        assert_eq!(s[(1, 0)], c(1.0, 0.0));
        assert_eq!(s[(2, 1)], c(1.0, 0.0));
        assert_eq!(s[(0, 1)], c(0.0, 0.0));
        let s2 = r_basis(3, -2).unwrap().dense();
        assert_eq!(s2[(0, 2)], c(1.0, 0.0));
        assert!((s2.frobenius_norm() - 1.0).abs() < 1e-15);
        assert!(matches!(r_basis(3, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn pure_toeplitz_examples() {
        let t = pure_toeplitz(2, c(0.0, 1.0)).unwrap().dense();
        assert_eq!(t[(0, 1)], c(0.0, -1.0));
        assert_eq!(t[(1, 0)], c(0.0, 1.0));
        assert!(matches!(pure_toeplitz(2, c(2.0, 0.0)), Err(Error::NotUnitModulus { .. })));
    }

    #[test]
    fn averaging_two_by_two() {
        let x = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (1, 1) => c(3.0, 0.0),
            (1, 0) => c(0.5, 0.25),
            _ => c(0.5, -0.25),
        });
        let e = averaging_projection(&x).unwrap();
        assert_eq!(e.coeff(0), c(2.0, 0.0));
        assert_eq!(e.coeff(1), c(0.5, 0.25));
        assert_eq!(e.coeff(-1), c(0.5, -0.25));
    }

    #[test]
    fn caratheodory_of_two_identity() {
        let d = caratheodory_decompose(&ToeplitzMatrix::identity(2).scale(c(2.0, 0.0)), 1e-9).unwrap();
        assert_eq!(d.atoms.len(), 2);
        assert!(d.residual <= 1e-9);
        assert!((d.total_weight() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn conv_hull_rejects_one_minus_one() {
        let r = conv_hull_membership(&[c(1.0, 0.0), c(-1.0, 0.0)], 1e-9).unwrap();
        assert!(!r.member);
        assert!((r.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn prime_selection() {
        assert_eq!(smallest_prime_above(4), 5);
        assert_eq!(smallest_prime_above(6), 7);
        assert_eq!(smallest_prime_above(8), 11);
        assert_eq!(smallest_prime_above(10), 11);
    }
}
