//! Elements of two-factor tensor products written in the product basis.
//!
//! A [`TensorCoeffs`] stores `c_{ℓk}` for `|ℓ| < n`, `|k| < m`. Depending on
//! [`TensorKind`] the basis is `r_ℓ ⊗ r_k`, `r_ℓ ⊗ χ_k` or `z^ℓ w^k`.

use serde::{Deserialize, Serialize};
use tcone_numerics::{cjson, ComplexMatrix, C64};

use crate::fejer_riesz::TrigPoly;
use crate::separability::BlockToeplitz;
use crate::toeplitz::ToeplitzMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    /// `C(S¹)⁽ⁿ⁾ ⊗ C(S¹)⁽ᵐ⁾`, basis `r_ℓ ⊗ r_k`
    ToeplitzToeplitz,
    /// `C(S¹)⁽ⁿ⁾ ⊗ C(S¹)₍ₘ₎`, basis `r_ℓ ⊗ χ_k`
    ToeplitzFr,
    /// `C(S¹)₍ₙ₎ ⊗ C(S¹)₍ₘ₎`, basis `z^ℓ w^k`
    FrFr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorRepr", into = "TensorRepr")]
pub struct TensorCoeffs {
    kind: TensorKind,
    n: usize,
    m: usize,
    /// row-major: `ℓ` outer, `k` inner
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    kind: TensorKind,
    n: usize,
    m: usize,
    #[serde(with = "cjson::nested")]
    coeffs: Vec<Vec<C64>>,
}

impl TryFrom<TensorRepr> for TensorCoeffs {
    type Error = Error;

    fn try_from(r: TensorRepr) -> Result<Self> {
        TensorCoeffs::from_rows(r.kind, r.n, r.m, r.coeffs)
    }
}

impl From<TensorCoeffs> for TensorRepr {
    fn from(t: TensorCoeffs) -> Self {
        let w = 2 * t.m - 1;
        TensorRepr { kind: t.kind, n: t.n, m: t.m, coeffs: t.coeffs.chunks(w).map(|c| c.to_vec()).collect() }
    }
}

/// Number of real coordinates of a Hermitian element, `(2n−1)(2m−1)`.
pub fn real_dim(n: usize, m: usize) -> usize {
    (2 * n - 1) * (2 * m - 1)
}

impl TensorCoeffs {
    pub fn zeros(kind: TensorKind, n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1);
        TensorCoeffs { kind, n, m, coeffs: vec![C64::new(0.0, 0.0); real_dim(n, m)] }
    }

    pub fn from_fn(kind: TensorKind, n: usize, m: usize, mut f: impl FnMut(i64, i64) -> C64) -> Self {
        let mut t = Self::zeros(kind, n, m);
        for l in t.l_range() {
            for k in t.k_range() {
                let idx = t.index(l, k);
                t.coeffs[idx] = f(l, k);
            }
        }
        t
    }

    /// Rows indexed by `ℓ = −n+1..n−1`, each listing `k = −m+1..m−1`.
    pub fn from_rows(kind: TensorKind, n: usize, m: usize, rows: Vec<Vec<C64>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("tensor dimensions must be at least 1".into()));
        }
        if rows.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * n - 1, found: rows.len() });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != 2 * m - 1) {
            return Err(Error::DimensionMismatch { expected: 2 * m - 1, found: bad.len() });
        }
        let coeffs: Vec<C64> = rows.into_iter().flatten().collect();
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(TensorCoeffs { kind, n, m, coeffs })
    }

    /// `Σ_ℓ Σ_k a_ℓ b_k` times `weight`; `a` has `2n−1` entries, `b` has `2m−1`.
    pub fn product(kind: TensorKind, a: &[C64], b: &[C64], weight: f64) -> Self {
        assert!(a.len() % 2 == 1 && b.len() % 2 == 1);
        let n = a.len().div_ceil(2);
        let m = b.len().div_ceil(2);
        let w = 2 * m - 1;
        let coeffs = (0..a.len() * w).map(|i| a[i / w] * b[i % w] * weight).collect();
        TensorCoeffs { kind, n, m, coeffs }
    }

    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l_range(&self) -> std::ops::Range<i64> {
        -(self.n as i64) + 1..self.n as i64
    }

    pub fn k_range(&self) -> std::ops::Range<i64> {
        -(self.m as i64) + 1..self.m as i64
    }

    fn index(&self, l: i64, k: i64) -> usize {
        let row = (l + self.n as i64 - 1) as usize;
        let col = (k + self.m as i64 - 1) as usize;
        row * (2 * self.m - 1) + col
    }

    /// `c_{ℓk}`; zero outside the index box.
    pub fn get(&self, l: i64, k: i64) -> C64 {
        if l.abs() >= self.n as i64 || k.abs() >= self.m as i64 {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[self.index(l, k)]
    }

    /// Panics outside the index box.
    pub fn set(&mut self, l: i64, k: i64, value: C64) {
        assert!(l.abs() < self.n as i64 && k.abs() < self.m as i64);
        let idx = self.index(l, k);
        self.coeffs[idx] = value;
    }

    /// Coefficient row `c_{ℓ,·}`.
    pub fn row(&self, l: i64) -> Vec<C64> {
        self.k_range().map(|k| self.get(l, k)).collect()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.coeffs
    }

    /// `max |c_{−ℓ,−k} − conj c_{ℓk}|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for l in self.l_range() {
            for k in self.k_range() {
                worst = worst.max((self.get(-l, -k) - self.get(l, k).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.coeffs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        self.hermitian_defect() <= 1e-12 * scale
    }

    fn check_same_shape(&self, other: &TensorCoeffs) {
        assert_eq!((self.kind, self.n, self.m), (other.kind, other.n, other.m), "tensor shapes differ");
    }

    /// Panics on a shape mismatch.
    pub fn add(&self, other: &TensorCoeffs) -> Self {
        self.check_same_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        TensorCoeffs { coeffs, ..*self }
    }

    /// Panics on a shape mismatch.
    pub fn sub(&self, other: &TensorCoeffs) -> Self {
        self.check_same_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        TensorCoeffs { coeffs, ..*self }
    }

    pub fn scale(&self, s: f64) -> Self {
        TensorCoeffs { coeffs: self.coeffs.iter().map(|z| z * s).collect(), ..*self }
    }

    /// Same coefficients read in another basis.
    pub fn with_kind(&self, kind: TensorKind) -> Self {
        TensorCoeffs { kind, ..self.clone() }
    }

    /// Applies `χ_k ↦ χ_{−k}` on the second factor.
    pub fn reverse_second(&self) -> Self {
        TensorCoeffs::from_fn(self.kind, self.n, self.m, |l, k| self.get(l, -k))
    }

    /// Frobenius norm of `Σ c_{ℓk} r_ℓ ⊗ r_k`, i.e. each coefficient weighted
    /// by the `(n−|ℓ|)(m−|k|)` entries it occupies.
    pub fn dense_frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for l in self.l_range() {
            for k in self.k_range() {
                let mult = (self.n as i64 - l.abs()) * (self.m as i64 - k.abs());
                acc += mult as f64 * self.get(l, k).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Real coordinates: `Re c₀₀`, then `(Re, Im)` of `c_{ℓk}` for the pairs
    /// with `ℓ > 0`, or `ℓ = 0` and `k > 0`. Faithful on Hermitian elements.
    pub fn real_coords(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(real_dim(self.n, self.m));
        out.push(self.get(0, 0).re);
        for (l, k) in half_pairs(self.n, self.m) {
            let z = self.get(l, k);
            out.push(z.re);
            out.push(z.im);
        }
        out
    }

    /// Hermitian element with the given real coordinates.
    pub fn from_real_coords(kind: TensorKind, n: usize, m: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != real_dim(n, m) {
            return Err(Error::DimensionMismatch { expected: real_dim(n, m), found: coords.len() });
        }
        let mut t = Self::zeros(kind, n, m);
        t.set(0, 0, C64::new(coords[0], 0.0));
        for (i, (l, k)) in half_pairs(n, m).enumerate() {
            let z = C64::new(coords[1 + 2 * i], coords[2 + 2 * i]);
            t.set(l, k, z);
            t.set(-l, -k, z.conj());
        }
        Ok(t)
    }

    /// `Σ c_{ℓk} r_ℓ ⊗ B_k` with `B_k = r_k` (Toeplitz second factor).
    pub fn to_block_toeplitz(&self) -> Result<BlockToeplitz> {
        if self.kind != TensorKind::ToeplitzToeplitz {
            return Err(Error::InvalidArgument("only Toeplitz⊗Toeplitz elements have a dense form".into()));
        }
        let blocks = self
            .l_range()
            .map(|l| ToeplitzMatrix::new(self.m, self.row(l)).map(|t| t.dense()))
            .collect::<Result<Vec<_>>>()?;
        BlockToeplitz::new(self.n, self.m, blocks)
    }

    pub fn dense(&self) -> Result<ComplexMatrix> {
        Ok(self.to_block_toeplitz()?.dense())
    }

    /// Reads a block Toeplitz matrix with Toeplitz blocks into coefficients,
    /// averaging each block along its diagonals.
    pub fn from_block_toeplitz(x: &BlockToeplitz) -> Result<Self> {
        let mut t = Self::zeros(TensorKind::ToeplitzToeplitz, x.n(), x.m());
        for l in t.l_range() {
            let b = crate::toeplitz::averaging_projection(x.block(l))?;
            for k in t.k_range() {
                t.set(l, k, b.coeff(k));
            }
        }
        Ok(t)
    }

    /// Second-factor slice `Σ_k c_{ℓk} χ_k`.
    pub fn second_factor_poly(&self, l: i64) -> TrigPoly {
        TrigPoly::new(self.m, self.row(l)).expect("row has 2m−1 entries")
    }

    /// `F(z, w) = Σ c_{ℓk} z^ℓ w^k`.
    pub fn eval_bivariate(&self, z: C64, w: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for l in self.l_range() {
            let zl = crate::toeplitz::powers_on_circle(z, l);
            for k in self.k_range() {
                acc += self.get(l, k) * zl * crate::toeplitz::powers_on_circle(w, k);
            }
        }
        acc
    }

    /// Matrix `Σ c_{ℓk} r_ℓ ⊗ r_k` for small shapes via explicit Kronecker sums.
    #[cfg(test)]
    pub(crate) fn dense_by_kron(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n * self.m, self.n * self.m);
        for l in self.l_range() {
            let rl = crate::toeplitz::r_basis(self.n, l).expect("in range").dense();
            for k in self.k_range() {
                let c = self.get(l, k);
                if c.norm() == 0.0 {
                    continue;
                }
                let rk = crate::toeplitz::r_basis(self.m, k).expect("in range").dense();
                out = &out + &rl.kron(&rk).scale(c);
            }
        }
        out
    }
}

/// `(ℓ, k)` with `ℓ > 0`, or `ℓ = 0` and `k > 0`, in row-major order.
pub fn half_pairs(n: usize, m: usize) -> impl Iterator<Item = (i64, i64)> {
    let (n, m) = (n as i64, m as i64);
    (0..n).flat_map(move |l| (-m + 1..m).filter(move |&k| l > 0 || k > 0).map(move |k| (l, k)))
}

/// Real dot product of two coordinate vectors.
pub fn real_pairing(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
