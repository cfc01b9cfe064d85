mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcone_core::circulant::{circulant_corner_test, circulant_expectation, diagonalize_circulant, fourier_atoms, u_theta, CornerOutcome};
use tcone_core::duality::{
    choi_block, cp_test, functional_from_toeplitz, hat_map, maximally_entangled, pair, positive_map_test_toeplitz_domain,
    toeplitz_extension, toeplitz_from_functional, truncate, coefficient_reversal, FrLinearMap, MapImages,
    ToeplitzDomainMap,
};
use tcone_core::fejer_riesz::{
    evaluate, extremal_poly, extremal_test, fejer_riesz_factorize, is_nonneg_on_circle, point_functional, TrigPoly,
};
use tcone_core::separability::{
    douglas_unitary, gurvits_decompose, max_cone_membership, moment_extension, separate_2xn,
    toeplitz_circulant_separate, BlockToeplitz, MaxConeOutcome,
};
use tcone_core::tensor::{TensorCoeffs, TensorKind};
use tcone_core::toeplitz::{
    averaging_projection, caratheodory_decompose, conv_hull_membership, pure_toeplitz, r_basis, r_matrix,
    r_n_separable_decomposition, ToeplitzMatrix,
};
use tcone_core::witness::{
    dual_extremal_vector, entanglement_certify, sep_star_test_2x2, sep_star_test_fr_fr,
    sep_star_test_toeplitz_toeplitz, universal_toeplitz, CertifyOutcome, WitnessOptions,
};
use tcone_core::Error;
use tcone_numerics::{cis, psd_check, root_of_unity, ComplexMatrix, C64};

fn one() -> C64 {
    c(1.0, 0.0)
}

#[test]
fn r_basis_lower_corner() {
    let r = r_basis(3, -2).unwrap().dense();
    for i in 0..3 {
        for j in 0..3 {
            let expected = if (i, j) == (0, 2) { 1.0 } else { 0.0 };
            assert_eq!(r[(i, j)], c(expected, 0.0));
        }
    }
    assert!(matches!(r_basis(3, 3), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn pure_toeplitz_at_i() {
    let t = pure_toeplitz(2, c(0.0, 1.0)).unwrap().dense();
    let expected = ComplexMatrix::from_vec(2, 2, vec![one(), c(0.0, -1.0), c(0.0, 1.0), one()]);
    assert!(t.distance(&expected) < 1e-15);
    assert!(matches!(pure_toeplitz(2, c(1.1, 0.0)), Err(Error::NotUnitModulus { .. })));
}

#[test]
fn pure_toeplitz_is_positive_rank_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 3..=6 {
        for _ in 0..20 {
            let t = pure_toeplitz(n, random_unit(&mut rng)).unwrap().dense();
            let e = tcone_numerics::hermitian_eigendecompose(&t).unwrap();
            assert!(e.min_eigenvalue().abs() < 1e-12);
            assert!((e.max_eigenvalue() - n as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn averaging_two_by_two() {
    let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 5.0]]);
    let t = averaging_projection(&x).unwrap();
    assert_eq!(t.coeff(0), c(3.0, 0.0));
    assert_eq!(t.coeff(1), c(3.0, 0.0));
    assert_eq!(t.coeff(-1), c(2.0, 0.0));
}

#[test]
fn averaging_is_positive_but_not_completely_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let x = random_psd(2, 2, &mut rng);
        assert!(min_eig(&averaging_projection(&x).unwrap().dense()) >= -1e-12);
    }
    let mut choi = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let e = ComplexMatrix::from_fn(2, 2, |a, b| if (a, b) == (i, j) { one() } else { c(0.0, 0.0) });
            let img = averaging_projection(&e).unwrap().dense();
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * i + a, 2 * j + b)] = img[(a, b)];
                }
            }
        }
    }
    assert!(min_eig(&choi) < -0.4);
}

#[test]
fn caratheodory_examples() {
    let lambda = cis(0.9);
    let d = caratheodory_decompose(&pure_toeplitz(4, lambda).unwrap(), 1e-9).unwrap();
    assert_eq!(d.atoms.len(), 1);
    assert!((d.atoms[0].lambda - lambda).norm() < 1e-9);
    assert!((d.atoms[0].weight - 1.0).abs() < 1e-9);

    let two_i = ToeplitzMatrix::identity(2).scale(c(2.0, 0.0));
    let d = caratheodory_decompose(&two_i, 1e-9).unwrap();
    assert!(d.residual < 1e-9);
    assert!((d.total_weight() - 2.0).abs() < 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut t = ToeplitzMatrix::zeros(5);
    for _ in 0..3 {
        let w = rng.gen_range(0.2..2.0);
        t = t.add(&pure_toeplitz(5, random_unit(&mut rng)).unwrap().scale(c(w, 0.0)));
    }
    let d = caratheodory_decompose(&t, 1e-9).unwrap();
    assert!(d.residual <= 1e-8, "residual {}", d.residual);
    assert!(d.atoms.len() <= 5);

    let bad = ToeplitzMatrix::from_fn(2, |l| if l == 0 { one() } else { c(2.0, 0.0) });
    assert!(matches!(caratheodory_decompose(&bad, 1e-9), Err(Error::NotPositive { .. })));
}

#[test]
fn conv_hull_examples() {
    let lambda = cis(2.1);
    let r = conv_hull_membership(&[lambda, lambda * lambda], 1e-9).unwrap();
    assert!(r.member);
    assert_eq!(r.decomposition.unwrap().atoms.len(), 1);
    assert!(conv_hull_membership(&[c(0.0, 0.0), c(0.0, 0.0)], 1e-9).unwrap().member);
    assert!(!conv_hull_membership(&[c(1.5, 0.0)], 1e-9).unwrap().member);
}

#[test]
fn r_matrix_blocks_and_positivity() {
    let r = r_matrix(2).unwrap().dense();
    let expected = ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 1.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[1.0, 0.0, 0.0, 1.0],
    ]);
    assert!(r.distance(&expected) < 1e-15);
    for n in 2..=6 {
        assert!(min_eig(&r_matrix(n).unwrap().dense()) >= -1e-10);
    }
}

#[test]
fn r_n_decomposition_atom_counts() {
    let d2 = r_n_separable_decomposition(2).unwrap();
    assert_eq!((d2.atoms.len(), d2.prime), (5, Some(5)));
    let d3 = r_n_separable_decomposition(3).unwrap();
    assert_eq!((d3.atoms.len(), d3.prime), (7, Some(7)));
    assert!(d3.dense().distance(&r_matrix(3).unwrap().dense()) < 1e-12);
}

#[test]
fn nonneg_band_two() {
    let alpha1 = cis(0.8) * 0.5;
    let f = |a0: f64| TrigPoly::from_fn(2, |l| match l {
        0 => c(a0, 0.0),
        1 => alpha1,
        _ => alpha1.conj(),
    });
    let tight = is_nonneg_on_circle(&f(1.0), 1e-9).unwrap();
    assert!(tight.nonneg);
    assert!(tight.min_value.abs() < 1e-9);
    let neg = is_nonneg_on_circle(&f(0.0), 1e-9).unwrap();
    assert!(!neg.nonneg);
    assert!((neg.min_value + 1.0).abs() < 1e-9);
    assert!((neg.argmin + alpha1.conj() / alpha1.norm()).norm() < 1e-6);
}

#[test]
fn factorize_random_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let h: Vec<C64> = (0..5).map(|_| random_c(&mut rng)).collect();
        let f = TrigPoly::abs_squared(&h, 5).unwrap();
        let sf = fejer_riesz_factorize(&f, 1e-9).unwrap();
        assert!(sf.residual <= 1e-8 * f.coefficient_l1().max(1.0), "residual {}", sf.residual);
        for i in 0..16 {
            let z = cis(TAU * i as f64 / 16.0);
            let v = evaluate(&f, z).unwrap().re;
            assert!((sf.eval(z).norm_sqr() - v).abs() <= 1e-8 * f.coefficient_l1().max(1.0));
        }
    }
    let neg = TrigPoly::from_fn(2, |l| if l == 0 { c(-1.0, 0.0) } else { c(0.0, 0.0) });
    assert!(matches!(fejer_riesz_factorize(&neg, 1e-9), Err(Error::NotNonnegative { .. })));
    assert!(matches!(fejer_riesz_factorize(&TrigPoly::zeros(3), 1e-9), Err(Error::ZeroPolynomial)));
}

#[test]
fn extremal_examples() {
    let f = extremal_poly(3, &[0.3, 2.0]);
    assert!(extremal_test(&f, 1e-9).unwrap());
    let g = TrigPoly::from_fn(2, |l| if l == 0 { c(3.0, 0.0) } else { one() });
    assert!(!extremal_test(&g, 1e-9).unwrap());
    assert!(!extremal_test(&TrigPoly::monomial(3, 0).unwrap(), 1e-9).unwrap());
}

#[test]
fn point_functional_examples() {
    let chi0 = TrigPoly::monomial(3, 0).unwrap();
    assert_eq!(point_functional(cis(1.0), &chi0).unwrap(), 1.0);
    let f = TrigPoly::from_fn(2, |l| if l == 0 { c(2.0, 0.0) } else { one() });
    assert!((point_functional(one(), &f).unwrap() - 4.0).abs() < 1e-14);
}

#[test]
fn pairing_with_pure_toeplitz_is_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(1..6);
        let lambda = random_unit(&mut rng);
        let f = TrigPoly::from_fn(n, |_| random_c(&mut rng));
        let p = pair(&pure_toeplitz(n, lambda).unwrap(), &f).unwrap();
        assert!((p - evaluate(&f, lambda.conj()).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn functional_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(1..7);
        let t = ToeplitzMatrix::from_fn(n, |_| random_c(&mut rng));
        let back = toeplitz_from_functional(&functional_from_toeplitz(&t)).unwrap();
        assert!(back.add(&t.scale(c(-1.0, 0.0))).frobenius_norm() < 1e-14);
    }
}

#[test]
fn hat_map_on_products() {
    let (lambda, mu) = (cis(0.4), cis(-1.7));
    let (n, m) = (3, 2);
    let tn = pure_toeplitz(n, lambda).unwrap();
    let tm = pure_toeplitz(m, mu).unwrap().dense();
    let blocks = (-(n as i64) + 1..n as i64).map(|l| tm.scale(tn.coeff(l))).collect();
    let x = BlockToeplitz::new(n, m, blocks).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = TrigPoly::from_fn(n, |_| random_c(&mut rng));
    let got = hat_map(&x, &f).unwrap();
    assert!(got.distance(&tm.scale(evaluate(&f, lambda.conj()).unwrap())) < 1e-12);
    let chi0 = TrigPoly::monomial(n, 0).unwrap();
    assert!(hat_map(&x, &chi0).unwrap().distance(x.block(0)) < 1e-15);
}

#[test]
fn point_evaluation_map_is_completely_positive() {
    let lambda = cis(1.2);
    let images = (-2..=2).map(|l: i64| ComplexMatrix::from_diag(&[lambda.powi(l as i32)])).collect();
    let phi = FrLinearMap::new(3, MapImages::Dense(images)).unwrap();
    let report = cp_test(&phi, 1e-9).unwrap();
    assert!(report.completely_positive);
    let choi = choi_block(&phi).unwrap();
    let e = tcone_numerics::hermitian_eigendecompose(&choi).unwrap();
    let rank = e.eigenvalues.iter().filter(|v| **v > 1e-9).count();
    assert_eq!(rank, 1);
}

#[test]
fn canonical_map_and_twist() {
    assert!(cp_test(&FrLinearMap::canonical(3).unwrap(), 1e-9).unwrap().completely_positive);
    let twist = |z: f64| ComplexMatrix::from_real_rows(&[&[0.0, z], &[0.0, 0.0]]);
    let images = vec![twist(2.0), ComplexMatrix::identity(2), twist(2.0).adjoint()];
    let phi = FrLinearMap::new(2, MapImages::Dense(images)).unwrap();
    let report = cp_test(&phi, 1e-9).unwrap();
    assert!(!report.completely_positive);
    assert!((report.min_eigenvalue + 1.0).abs() < 1e-9);
}

#[test]
fn toeplitz_domain_positivity() {
    let id = ToeplitzDomainMap::new(3, (-2..=2).map(|l| r_basis(3, l).unwrap().dense()).collect()).unwrap();
    assert!(positive_map_test_toeplitz_domain(&id, 0, 1e-9).unwrap().positive);
    let mut images: Vec<ComplexMatrix> = (-1..=1).map(|l| r_basis(2, l).unwrap().dense()).collect();
    images[0] = images[0].scale_real(3.0);
    images[2] = images[2].scale_real(3.0);
    let bad = ToeplitzDomainMap::new(2, images).unwrap();
    let r = positive_map_test_toeplitz_domain(&bad, 0, 1e-9).unwrap();
    assert!(!r.positive);
    assert!((r.min_eigenvalue + 2.0).abs() < 1e-9);
}

#[test]
fn maximally_entangled_and_reversal() {
    let xi = maximally_entangled(2).unwrap();
    assert!(xi.entangled);
    assert_eq!(xi.state.get(1, -1), one());
    assert_eq!(xi.state.get(1, 1), c(0.0, 0.0));
    assert_eq!(coefficient_reversal(&xi.state), universal_toeplitz(2));
}

#[test]
fn entangled_state_pairs_nonnegatively_with_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 3;
    let xi = maximally_entangled(n).unwrap().state;
    for _ in 0..400 {
        let eta: Vec<C64> = (0..n).map(|_| random_c(&mut rng)).collect();
        let z = random_unit(&mut rng);
        let mut total = c(0.0, 0.0);
        for l in xi.l_range() {
            let r = r_basis(n, l).unwrap().dense();
            let state = r.quadratic_form(&eta);
            for k in xi.k_range() {
                total += xi.get(l, k) * state * z.powi(k as i32);
            }
        }
        assert!(total.re >= -1e-12 && total.im.abs() < 1e-12);
    }
}

#[test]
fn truncation_and_extension() {
    let lambda = cis(0.3);
    let t3 = pure_toeplitz(3, lambda).unwrap();
    assert_eq!(truncate(&t3, 2).unwrap(), pure_toeplitz(2, lambda).unwrap());
    let t5 = toeplitz_extension(&pure_toeplitz(2, lambda).unwrap(), 5, 1e-9).unwrap();
    assert!(t5.add(&pure_toeplitz(5, lambda).unwrap().scale(c(-1.0, 0.0))).frobenius_norm() < 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let t = random_psd_toeplitz(3, &mut rng);
        let ext = toeplitz_extension(&t, 6, 1e-9).unwrap();
        assert!(min_eig(&ext.dense()) >= -1e-8);
        let back = truncate(&ext, 3).unwrap();
        assert!(back.add(&t.scale(c(-1.0, 0.0))).frobenius_norm() <= 1e-8);
    }
}

#[test]
fn circulant_examples() {
    let u = u_theta(3, 0.0).unwrap().dense();
    let cube = u.matmul(&u).matmul(&u);
    assert!(cube.distance(&ComplexMatrix::identity(3)) < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let n = rng.gen_range(2..6);
        let theta = rng.gen_range(0.0..TAU);
        let g = tcone_core::GeneralizedCirculant::new(n, theta, (0..n).map(|_| random_c(&mut rng)).collect()).unwrap();
        let b = diagonalize_circulant(n, theta).unwrap();
        let d = b.v.adjoint().matmul(&g.dense()).matmul(&b.v);
        let expected = ComplexMatrix::from_diag(&g.eigenvalues());
        assert!(d.distance(&expected) < 1e-12);
    }
}

#[test]
fn expectation_fixes_circulants_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = tcone_core::GeneralizedCirculant::new(4, 0.0, (0..4).map(|_| random_c(&mut rng)).collect()).unwrap();
    assert!(circulant_expectation(&g.dense(), 0.0).unwrap().dense().distance(&g.dense()) < 1e-12);
    for _ in 0..1000 {
        let x = random_psd(3, 2, &mut rng);
        assert!(min_eig(&circulant_expectation(&x, 0.5).unwrap().dense()) >= -1e-12);
    }
    let atoms = fourier_atoms(2, 0.0).unwrap();
    let mut choi = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let e = ComplexMatrix::from_fn(2, 2, |a, b| if (a, b) == (i, j) { one() } else { c(0.0, 0.0) });
            let img = circulant_expectation(&e, 0.0).unwrap().dense();
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * i + a, 2 * j + b)] = img[(a, b)];
                }
            }
        }
    }
    assert!(min_eig(&choi) >= -1e-12);
    assert_eq!(atoms.len(), 2);
}

#[test]
fn corner_examples() {
    for m in 3..8 {
        assert!(circulant_corner_test(one(), m, 1e-9).unwrap().is_feasible());
        assert!(circulant_corner_test(root_of_unity(1, m as u64), m, 1e-9).unwrap().is_feasible());
    }
    match circulant_corner_test(cis(PI / 3.0), 3, 1e-9).unwrap() {
        CornerOutcome::Infeasible { margin, .. } => assert!(margin > 0.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn douglas_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = random_matrix(3, 3, &mut rng);
    let u = tcone_numerics::hermitian_eigendecompose(&random_psd(3, 3, &mut rng)).unwrap().vectors;
    let y = x.matmul(&u);
    let w = douglas_unitary(&x, &y, 1e-9).unwrap();
    assert!(w.unitarity_defect() < 1e-9);
    assert!(x.matmul(&w).distance(&y) < 1e-9);
    let bad = x.scale_real(2.0);
    assert!(matches!(douglas_unitary(&x, &bad, 1e-9), Err(Error::GramMismatch { .. })));
}

#[test]
fn gurvits_examples() {
    let r = gurvits_decompose(&r_matrix(3).unwrap(), 1e-8).unwrap();
    assert!(r.verified);
    assert!(r.atoms.len() <= r.rank);
    let mut bad_blocks = r_matrix(2).unwrap().blocks().to_vec();
    bad_blocks[1] = ComplexMatrix::identity(2).scale_real(-1.0);
    let bad = BlockToeplitz::new(2, 2, bad_blocks).unwrap();
    assert!(matches!(gurvits_decompose(&bad, 1e-8), Err(Error::NotPositive { .. })));
}

#[test]
fn separate_2xn_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let a = random_psd_toeplitz(3, &mut rng);
        let c_half = ToeplitzMatrix::from_fn(3, |_| random_c(&mut rng)).scale(c(0.05, 0.0));
        let mut a = a;
        a.set_coeff(0, a.coeff(0) + c(2.0, 0.0));
        let d = separate_2xn(&a, &c_half, 1e-9).unwrap();
        assert!(d.residual <= 1e-7, "residual {}", d.residual);
        assert!(d.atoms.iter().all(|x| x.weight >= 0.0));
    }
}

#[test]
fn circulant_blocks_examples() {
    let n = 3;
    let lambda = cis(0.6);
    let g = tcone_core::GeneralizedCirculant::new(3, 0.0, vec![c(2.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)]).unwrap().dense();
    let t = pure_toeplitz(n, lambda).unwrap();
    let blocks = (-2..=2).map(|l| g.scale(t.coeff(l))).collect();
    let x = BlockToeplitz::new(n, 3, blocks).unwrap();
    let d = toeplitz_circulant_separate(&x, 0.0, 1e-8).unwrap();
    assert!(d.verified);
    let blocks = (-2..=2).map(|l| ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]).scale(t.coeff(l))).collect();
    let y = BlockToeplitz::new(n, 3, blocks).unwrap();
    assert!(matches!(toeplitz_circulant_separate(&y, 0.0, 1e-8), Err(Error::BlocksNotCirculant { .. })));
}

#[test]
fn moment_extension_corner() {
    let lambda = cis(1.1);
    let mu = cis(-0.4);
    let x0 = pure_toeplitz(3, mu).unwrap();
    let x1 = x0.scale(lambda);
    let ext = moment_extension(&x0, &x1, 4, 1e-9).unwrap();
    assert!(ext.corner_residual <= 1e-8);
    assert!(min_eig(&ext.extension.dense()) >= -1e-8);
}

#[test]
fn max_cone_examples() {
    let rn = tcone_core::toeplitz::r_matrix_coeffs(3);
    assert!(matches!(max_cone_membership(&rn, 7, 7, 1e-9).unwrap(), MaxConeOutcome::Feasible { .. }));
    let lambda = root_of_unity(2, 8);
    let mu = root_of_unity(5, 8);
    let atom = TensorCoeffs::product(
        TensorKind::ToeplitzToeplitz,
        pure_toeplitz(2, lambda).unwrap().coeffs(),
        pure_toeplitz(2, mu).unwrap().coeffs(),
        1.0,
    );
    match max_cone_membership(&atom, 8, 8, 1e-9).unwrap() {
        MaxConeOutcome::Feasible { decomposition } => {
            assert!((decomposition.total_weight() - 1.0).abs() < 1e-8);
        }
        other => panic!("{other:?}"),
    }
    let id = TensorCoeffs::from_fn(TensorKind::ToeplitzToeplitz, 2, 2, |l, k| {
        if (l, k) == (0, 0) { one() } else { c(0.0, 0.0) }
    });
    match max_cone_membership(&id.sub(&atom.scale(2.0)), 8, 8, 1e-9).unwrap() {
        MaxConeOutcome::Unknown { grid_pairing, .. } => assert!(grid_pairing < 0.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dual_vector_states_are_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let roots: Vec<C64> = (0..2).map(|_| random_unit(&mut rng)).collect();
        let v = dual_extremal_vector(&roots).unwrap();
        let norm: f64 = v.xi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let t = random_psd_toeplitz(3, &mut rng);
        let s = v.state(&t).unwrap();
        assert!(s.re >= -1e-12 && s.im.abs() < 1e-10);
    }
}

#[test]
fn sep_star_toeplitz_toeplitz_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let a = random_psd_toeplitz(2, &mut rng);
    let b = random_psd_toeplitz(3, &mut rng);
    let product = TensorCoeffs::product(TensorKind::ToeplitzToeplitz, a.coeffs(), b.coeffs(), 1.0);
    assert!(sep_star_test_toeplitz_toeplitz(&product, 32, 1e-9).unwrap().member);
    let atom = TensorCoeffs::product(
        TensorKind::ToeplitzToeplitz,
        pure_toeplitz(2, cis(0.5)).unwrap().coeffs(),
        pure_toeplitz(2, cis(1.5)).unwrap().coeffs(),
        1.0,
    );
    let report = sep_star_test_toeplitz_toeplitz(&atom.scale(-1.0), 32, 1e-9).unwrap();
    assert!(!report.member);
    assert!(report.min_value < 0.0);
}

#[test]
fn sep_star_2x2_examples() {
    let id = ToeplitzMatrix::identity(2);
    let zero = ToeplitzMatrix::zeros(2);
    assert!(sep_star_test_2x2(&id, &zero, 0, 1e-9).unwrap().member);
    let big = ToeplitzMatrix::identity(2).scale(c(3.0, 0.0));
    let r = sep_star_test_2x2(&id, &big, 0, 1e-9).unwrap();
    assert!(!r.member);
    assert!((r.min_value + 2.0).abs() < 1e-9);
}

#[test]
fn sep_star_fr_fr_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let f = TrigPoly::abs_squared(&[random_c(&mut rng), random_c(&mut rng)], 2).unwrap();
    let g = TrigPoly::abs_squared(&[random_c(&mut rng), random_c(&mut rng), random_c(&mut rng)], 3).unwrap();
    let product = TensorCoeffs::product(TensorKind::FrFr, f.coeffs(), g.coeffs(), 1.0);
    assert!(sep_star_test_fr_fr(&product, 0, 1e-9).unwrap().member);
    let shifted = TensorCoeffs::from_fn(TensorKind::FrFr, 2, 2, |l, k| match (l, k) {
        (0, 0) => one(),
        (1, 1) | (-1, -1) => one(),
        _ => c(0.0, 0.0),
    });
    let r = sep_star_test_fr_fr(&shifted, 0, 1e-9).unwrap();
    assert!(!r.member);
    assert!((r.min_value + 1.0).abs() < 1e-9);
}

#[test]
fn certify_separable_product() {
    let f = TrigPoly::from_fn(2, |l| if l == 0 { c(0.5, 0.0) } else { c(0.25, 0.0) });
    let x = TensorCoeffs::product(TensorKind::ToeplitzFr, pure_toeplitz(2, one()).unwrap().coeffs(), f.coeffs(), 1.0);
    match entanglement_certify(&x, &WitnessOptions::default()).unwrap() {
        CertifyOutcome::Separable { terms, residual } => {
            assert!(residual < 1e-8);
            let top = terms.iter().map(|t| t.weight).fold(0.0, f64::max);
            let total: f64 = terms.iter().map(|t| t.weight).sum();
            assert!(top >= 0.9 * total);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn certify_universal_element_round_trips() {
    let t2 = universal_toeplitz(2);
    match entanglement_certify(&t2, &WitnessOptions::default()).unwrap() {
        CertifyOutcome::Entangled { certificate } => {
            let json = serde_json::to_string(&certificate).unwrap();
            let back: tcone_core::WitnessCertificate = serde_json::from_str(&json).unwrap();
            assert_eq!(back, certificate);
            assert!(back.reverify().valid);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn json_round_trips_are_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let t = ToeplitzMatrix::from_fn(3, |_| random_c(&mut rng));
    let back: ToeplitzMatrix = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
    let f = TrigPoly::from_fn(3, |_| random_c(&mut rng));
    let back: TrigPoly = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(back, f);
    let x = block_toeplitz_from_upper(2, 2, &[random_matrix(2, 2, &mut rng), random_matrix(2, 2, &mut rng)]);
    let back: BlockToeplitz = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(back, x);
    let coeffs = TensorCoeffs::from_fn(TensorKind::ToeplitzFr, 2, 3, |_, _| random_c(&mut rng));
    let back: TensorCoeffs = serde_json::from_str(&serde_json::to_string(&coeffs).unwrap()).unwrap();
    assert_eq!(back, coeffs);
    let phi = FrLinearMap::canonical(2).unwrap();
    let back: FrLinearMap = serde_json::from_str(&serde_json::to_string(&phi).unwrap()).unwrap();
    assert_eq!(back, phi);
    assert!(psd_check(&x.dense().hermitian_part(), 1e-9).is_ok());
}
