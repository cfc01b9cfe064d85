#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tcone_core::separability::BlockToeplitz;
use tcone_core::toeplitz::ToeplitzMatrix;
use tcone_numerics::{cis, hermitian_eigendecompose, ComplexMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> C64 {
    cis(rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_c(rng))
}

pub fn random_psd(m: usize, rank: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = random_matrix(m, rank, rng);
    g.matmul(&g.adjoint()).hermitian_part()
}

pub fn random_hermitian_toeplitz(n: usize, rng: &mut ChaCha8Rng) -> ToeplitzMatrix {
    let upper: Vec<C64> = (0..n).map(|_| random_c(rng)).collect();
    ToeplitzMatrix::from_fn(n, |l| match l {
        0 => c(upper[0].re, 0.0),
        l if l > 0 => upper[l as usize],
        l => upper[(-l) as usize].conj(),
    })
}

/// Random Hermitian Toeplitz matrix shifted along the identity until positive.
pub fn random_psd_toeplitz(n: usize, rng: &mut ChaCha8Rng) -> ToeplitzMatrix {
    let mut t = random_hermitian_toeplitz(n, rng);
    let min = hermitian_eigendecompose(&t.dense()).unwrap().min_eigenvalue();
    if min < 0.0 {
        t.set_coeff(0, t.coeff(0) + c(1.1 * min.abs(), 0.0));
    }
    t
}

pub fn block_toeplitz_from_upper(n: usize, m: usize, upper: &[ComplexMatrix]) -> BlockToeplitz {
    let blocks = (-(n as i64) + 1..n as i64)
        .map(|l| match l {
            0 => upper[0].hermitian_part(),
            l if l > 0 => upper[l as usize].clone(),
            l => upper[(-l) as usize].adjoint(),
        })
        .collect();
    BlockToeplitz::new(n, m, blocks).unwrap()
}

pub fn min_eig(h: &ComplexMatrix) -> f64 {
    hermitian_eigendecompose(&h.hermitian_part()).unwrap().min_eigenvalue()
}
