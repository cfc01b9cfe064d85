//! Finite-dimensional Toeplitz and Fejér–Riesz operator systems.
//!
//! Toeplitz matrices `Σ τ_ℓ r_ℓ` and trigonometric polynomials `Σ f̂(ℓ) χ_ℓ`
//! are dual cones under `⟨T, f⟩ = Σ τ_{−k} f̂(k)`. The crate decides
//! positivity on both sides, factors and decomposes positive elements,
//! separates positive block Toeplitz matrices into product atoms and
//! produces checkable entanglement witnesses for mixed tensor products.

pub mod circulant;
pub mod duality;
mod error;
pub mod fejer_riesz;
mod optimize;
pub mod separability;
pub mod tensor;
pub mod toeplitz;
pub mod witness;

pub use error::{Error, Result};
pub use tcone_numerics::{ComplexMatrix, C64};

pub use circulant::{circulant_corner_test, circulant_expectation, diagonalize_circulant, u_theta, GeneralizedCirculant};
pub use duality::{
    choi_block, cp_test, embed, functional_from_toeplitz, hat_map, maximally_entangled, pair,
    positive_map_test_toeplitz_domain, toeplitz_extension, toeplitz_from_functional, truncate, FrLinearMap,
    MapImages, ToeplitzDomainMap,
};
pub use fejer_riesz::{extremal_test, fejer_riesz_factorize, is_nonneg_on_circle, TrigPoly};
pub use separability::{
    douglas_unitary, gurvits_decompose, max_cone_membership, moment_extension, separate_2xn,
    toeplitz_circulant_separate, BlockToeplitz, ProductDecomposition, SeparableDecomposition,
};
pub use tensor::{TensorCoeffs, TensorKind};
pub use toeplitz::{caratheodory_decompose, pure_toeplitz, r_matrix, r_n_separable_decomposition, ToeplitzMatrix};
pub use witness::{
    dual_extremal_vector, entanglement_certify, sep_star_test_2x2, sep_star_test_fr_fr,
    sep_star_test_toeplitz_toeplitz, WitnessCertificate,
};
