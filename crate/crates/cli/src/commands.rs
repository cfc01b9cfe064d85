use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use tcone_core::circulant::{circulant_corner_test, CornerOutcome};
use tcone_core::duality::{
    cp_test, pair, positive_map_test_toeplitz_domain, toeplitz_extension, truncate, FrLinearMap, ToeplitzDomainMap,
};
use tcone_core::fejer_riesz::{fejer_riesz_factorize, is_nonneg_on_circle, TrigPoly};
use tcone_core::separability::{
    gurvits_decompose, moment_extension, separate_2xn, toeplitz_circulant_separate, two_by_n_dense, BlockToeplitz,
};
use tcone_core::tensor::{TensorCoeffs, TensorKind};
use tcone_core::toeplitz::{caratheodory_decompose, conv_hull_membership, r_n_separable_decomposition, ToeplitzMatrix};
use tcone_core::witness::{
    entanglement_certify, sep_star_test_fr_fr, sep_star_test_toeplitz_toeplitz, CertifyOutcome, WitnessOptions,
};
use tcone_core::{ComplexMatrix, Error, C64};
use tcone_numerics::{hermitian_eigendecompose, psd_check};

use crate::input::Inputs;
use crate::{Command, Common, Failure, Verdict};

type Executed = (&'static str, Inputs, Verdict, Value);

const SEPSTAR_GRID: usize = 64;
const WITNESS_LAMBDA_GRID: usize = 48;

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("outcome serializes")
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

/// Library errors that are not a negative answer mean the input violates a precondition.
fn rejected(e: Error) -> Failure {
    Failure::Format(e.to_string())
}

/// Negative outcome with the eigenvector of the smallest eigenvalue as certificate.
fn not_positive(h: &ComplexMatrix) -> Result<(Verdict, Value), Failure> {
    let eig = hermitian_eigendecompose(&h.hermitian_part()).map_err(|e| rejected(e.into()))?;
    let vector: Vec<[f64; 2]> = eig.vector(0).iter().map(|z| [z.re, z.im]).collect();
    Ok((
        Verdict::Negative,
        json!({ "status": "not_positive", "min_eigenvalue": eig.min_eigenvalue(), "vector": vector }),
    ))
}

/// Runs `f`, turning `NotPositive` into a negative outcome certified on `h`.
fn positive_or<T: Serialize>(
    result: tcone_core::Result<T>,
    h: impl FnOnce() -> ComplexMatrix,
    verdict_of: impl FnOnce(&T) -> Verdict,
) -> Result<(Verdict, Value), Failure> {
    match result {
        Ok(v) => Ok((verdict_of(&v), to_value(&v))),
        Err(Error::NotPositive { .. }) => not_positive(&h()),
        Err(e) => Err(rejected(e)),
    }
}

/// Picks the combined file when present, else both factor files.
fn combined_or_pair<'a>(
    combined: &'a Option<PathBuf>,
    first: &'a Option<PathBuf>,
    second: &'a Option<PathBuf>,
    names: (&str, &str),
) -> Result<Result<&'a Path, (&'a Path, &'a Path)>, Failure> {
    match (combined, first, second) {
        (Some(c), f, s) => {
            if f.is_some() || s.is_some() {
                eprintln!("note: --input given, ignoring --{} / --{}", names.0, names.1);
            }
            Ok(Ok(c))
        }
        (None, Some(f), Some(s)) => Ok(Err((f, s))),
        _ => Err(Failure::Usage(format!("expected --input or both --{} and --{}", names.0, names.1))),
    }
}

pub fn execute(command: &Command, common: &Common) -> Result<Executed, Failure> {
    let tol = common.tol;
    let name = command_name(command);
    let mut inputs = Inputs::new(name);
    inputs.param("tol", tol);
    inputs.param("grid", format!("{:?}", common.grid));
    inputs.param("seed", common.seed);

    let (verdict, outcome) = match command {
        Command::Psd { input } => {
            let h: ComplexMatrix = inputs.load("input", input)?;
            let report = psd_check(&h.hermitian_part(), tol).map_err(|e| rejected(e.into()))?;
            if report.passes {
                (Verdict::Positive, to_value(&report))
            } else {
                not_positive(&h)?
            }
        }
        Command::Carath { input } => {
            let t: ToeplitzMatrix = inputs.load("input", input)?;
            positive_or(caratheodory_decompose(&t, tol), || t.dense(), |_| Verdict::Positive)?
        }
        Command::FrFactor { input } => {
            let f: TrigPoly = inputs.load("input", input)?;
            match fejer_riesz_factorize(&f, tol) {
                Ok(factor) => (Verdict::Positive, to_value(&factor)),
                Err(Error::NotNonnegative { .. }) => {
                    let report = is_nonneg_on_circle(&f, tol).map_err(rejected)?;
                    (Verdict::Negative, to_value(&report))
                }
                Err(e) => return Err(rejected(e)),
            }
        }
        Command::FrNonneg { input } => {
            let f: TrigPoly = inputs.load("input", input)?;
            let report = is_nonneg_on_circle(&f, tol).map_err(rejected)?;
            (verdict(report.nonneg), to_value(&report))
        }
        Command::Gurvits { input } => {
            let x: BlockToeplitz = inputs.load("input", input)?;
            positive_or(gurvits_decompose(&x, tol), || x.dense(), |d| {
                if d.verified {
                    Verdict::Positive
                } else {
                    Verdict::Unknown
                }
            })?
        }
        Command::Sep2 { input, a, c } => {
            let (a, c): (ToeplitzMatrix, ToeplitzMatrix) = match combined_or_pair(input, a, c, ("a", "c"))? {
                Ok(path) => {
                    let file = inputs.combined(path)?;
                    (file.field("a")?, file.field("c")?)
                }
                Err((pa, pc)) => (inputs.load("a", pa)?, inputs.load("c", pc)?),
            };
            let scale = two_by_n_dense(&a, &c).frobenius_norm().max(1.0);
            positive_or(separate_2xn(&a, &c, tol), || two_by_n_dense(&a, &c), |d| {
                if d.residual <= tol * scale {
                    Verdict::Positive
                } else {
                    Verdict::Unknown
                }
            })?
        }
        Command::CircSep { input, theta } => {
            inputs.param("theta", theta);
            let x: BlockToeplitz = inputs.load("input", input)?;
            positive_or(toeplitz_circulant_separate(&x, *theta, tol), || x.dense(), |d| {
                if d.verified {
                    Verdict::Positive
                } else {
                    Verdict::Unknown
                }
            })?
        }
        Command::Extend { input, x0, x1, n } => {
            inputs.param("n", n);
            let (x0, x1): (ToeplitzMatrix, ToeplitzMatrix) = match combined_or_pair(input, x0, x1, ("x0", "x1"))? {
                Ok(path) => {
                    let file = inputs.combined(path)?;
                    (file.field("x0")?, file.field("x1")?)
                }
                Err((p0, p1)) => (inputs.load("x0", p0)?, inputs.load("x1", p1)?),
            };
            positive_or(moment_extension(&x0, &x1, *n, tol), || two_by_n_dense(&x0, &x1), |_| Verdict::Positive)?
        }
        Command::CpCheck { map } => {
            let phi: FrLinearMap = inputs.load("map", map)?;
            let report = cp_test(&phi, tol).map_err(rejected)?;
            (verdict(report.completely_positive), to_value(&report))
        }
        Command::PosCheck { map } => {
            let raw: ToeplitzDomainMap = inputs.load("map", map)?;
            let phi = ToeplitzDomainMap::new(raw.n, raw.images).map_err(rejected)?;
            let report = positive_map_test_toeplitz_domain(&phi, common.grid.unwrap_or(0), tol).map_err(rejected)?;
            (verdict(report.positive), to_value(&report))
        }
        Command::Pair { input, toeplitz, poly } => {
            let (t, f): (ToeplitzMatrix, TrigPoly) = match combined_or_pair(input, toeplitz, poly, ("toeplitz", "poly"))? {
                Ok(path) => {
                    let file = inputs.combined(path)?;
                    (file.field("toeplitz")?, file.field("poly")?)
                }
                Err((pt, pf)) => (inputs.load("toeplitz", pt)?, inputs.load("poly", pf)?),
            };
            let value = pair(&t, &f).map_err(rejected)?;
            (Verdict::Positive, json!({ "value": [value.re, value.im] }))
        }
        Command::Sepstar { input, first, second } => {
            let x = match combined_or_pair(input, first, second, ("first", "second"))? {
                Ok(path) => inputs.load::<TensorCoeffs>("input", path)?,
                Err((pa, pb)) => {
                    let a: ToeplitzMatrix = inputs.load("first", pa)?;
                    let b: ToeplitzMatrix = inputs.load("second", pb)?;
                    TensorCoeffs::product(TensorKind::ToeplitzToeplitz, a.coeffs(), b.coeffs(), 1.0)
                }
            };
            let report = sep_star_test_toeplitz_toeplitz(&x, common.grid.unwrap_or(SEPSTAR_GRID), tol).map_err(rejected)?;
            (verdict(report.member), to_value(&report))
        }
        Command::SepstarFr { input, first, second } => {
            let x = match combined_or_pair(input, first, second, ("first", "second"))? {
                Ok(path) => inputs.load::<TensorCoeffs>("input", path)?,
                Err((pa, pb)) => {
                    let f: TrigPoly = inputs.load("first", pa)?;
                    let g: TrigPoly = inputs.load("second", pb)?;
                    TensorCoeffs::product(TensorKind::FrFr, f.coeffs(), g.coeffs(), 1.0)
                }
            };
            let report = sep_star_test_fr_fr(&x, common.grid.unwrap_or(0), tol).map_err(rejected)?;
            (verdict(report.member), to_value(&report))
        }
        Command::Witness { input, root_grid } => {
            inputs.param("root_grid", root_grid);
            let x: TensorCoeffs = inputs.load("input", input)?;
            let opts = WitnessOptions {
                lambda_grid: common.grid.unwrap_or(WITNESS_LAMBDA_GRID),
                root_grid: *root_grid,
                seed: common.seed,
                tol,
            };
            let outcome = entanglement_certify(&x, &opts).map_err(rejected)?;
            let v = match &outcome {
                CertifyOutcome::Separable { .. } => Verdict::Positive,
                CertifyOutcome::Entangled { .. } => Verdict::Negative,
                CertifyOutcome::Unknown { .. } => Verdict::Unknown,
            };
            (v, to_value(&outcome))
        }
        Command::RnDecompose { n } => {
            inputs.param("n", n);
            let d = r_n_separable_decomposition(*n).map_err(|e| Failure::Usage(e.to_string()))?;
            (Verdict::Positive, to_value(&d))
        }
        Command::Truncate { input, n } => {
            inputs.param("n", n);
            let t: ToeplitzMatrix = inputs.load("input", input)?;
            (Verdict::Positive, to_value(&truncate(&t, *n).map_err(rejected)?))
        }
        Command::ExtendToeplitz { input, m } => {
            inputs.param("m", m);
            let t: ToeplitzMatrix = inputs.load("input", input)?;
            positive_or(toeplitz_extension(&t, *m, tol), || t.dense(), |_| Verdict::Positive)?
        }
        Command::CornerTest { zeta, m } => {
            inputs.param("zeta", zeta);
            inputs.param("m", m);
            let [re, im]: [f64; 2] = serde_json::from_str(zeta)
                .map_err(|e| Failure::Usage(format!("--zeta expects [re, im]: {e}")))?;
            let outcome = circulant_corner_test(C64::new(re, im), *m, tol).map_err(rejected)?;
            (verdict(matches!(outcome, CornerOutcome::Feasible { .. })), to_value(&outcome))
        }
        Command::ConvHull { input } => {
            let raw: Vec<[f64; 2]> = inputs.load("input", input)?;
            let xi: Vec<C64> = raw.iter().map(|[re, im]| C64::new(*re, *im)).collect();
            let report = conv_hull_membership(&xi, tol).map_err(rejected)?;
            (verdict(report.member), to_value(&report))
        }
    };
    Ok((name, inputs, verdict, outcome))
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Psd { .. } => "psd",
        Command::Carath { .. } => "carath",
        Command::FrFactor { .. } => "fr-factor",
        Command::FrNonneg { .. } => "fr-nonneg",
        Command::Gurvits { .. } => "gurvits",
        Command::Sep2 { .. } => "sep2",
        Command::CircSep { .. } => "circ-sep",
        Command::Extend { .. } => "extend",
        Command::CpCheck { .. } => "cp-check",
        Command::PosCheck { .. } => "pos-check",
        Command::Pair { .. } => "pair",
        Command::Sepstar { .. } => "sepstar",
        Command::SepstarFr { .. } => "sepstar-fr",
        Command::Witness { .. } => "witness",
        Command::RnDecompose { .. } => "rn-decompose",
        Command::Truncate { .. } => "truncate",
        Command::ExtendToeplitz { .. } => "extend-toeplitz",
        Command::CornerTest { .. } => "corner-test",
        Command::ConvHull { .. } => "conv-hull",
    }
}
