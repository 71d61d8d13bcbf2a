//! Entropic uncertainty relations for finite POVMs, spectral measures of
//! invariant operators, and the log-Sobolev bounds derived from them.
//!
//! The central inequality: for a density matrix `ρ` and POVMs `P`, `Q` whose
//! Liouville matrix `tr(P_i Q_j)` is dominated by `μ_P(i) μ_Q(j)`,
//!
//! ```text
//! -Σ ν_P ln(ν_P/μ_P) - Σ ν_Q ln(ν_Q/μ_Q) >= S(ρ)
//! ```
//!
//! where `ν_P(i) = tr(ρ P_i)` and `S` is the von Neumann entropy.
//!
//! ```
//! use povm_entropy::{mub_pair, povm_from_basis, liouville_matrix, product_majorant,
//!                    theorem1_deficit, DensityMatrix};
//!
//! let (e, f) = mub_pair(3);
//! let (p, q) = (povm_from_basis(&e), povm_from_basis(&f));
//! let (mu_p, mu_q) = product_majorant(&liouville_matrix(&p, &q).unwrap(), false);
//! let r = theorem1_deficit(&DensityMatrix::maximally_mixed(3), &p, &q, &mu_p, &mu_q).unwrap();
//! assert!(r.deficit.abs() < 1e-12);
//! ```

// Validation uses `!(x > 0.0)` style tests on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod error;
pub mod function_space;
pub mod logsobolev;
pub mod operator;
pub mod povm;
pub mod random;
pub mod runner;
pub mod spectral;
pub mod uncertainty;

pub use eigen::{jacobi_hermitian, EigenDecomposition};
pub use error::{Error, Result};
pub use function_space::{
    circle_scenario, hermite_function, hermite_scenario, quadrature_entropy, CircleRecord,
    CircleState, HermiteRecord, UniformGrid,
};
pub use logsobolev::{
    bound_comparison, concave_hull, gibbs_spectral_bound_deficit, gibbs_spectral_state,
    landau_legendre_closed_form, laplace_transform, legendre_of_log_laplace, LaplaceCurve,
    PiecewiseLinear,
};
pub use operator::{
    expm, gibbs_deficit, gibbs_state, golden_thompson_deficit, logm, shannon_entropy,
    von_neumann_entropy, DensityMatrix, HermitianOperator,
};
pub use povm::{
    dft_basis, liouville_matrix, measurement_distribution, mub_pair, povm_coarsen, povm_compress,
    povm_from_basis, povm_tensor_pair, product_majorant, Basis, FinitePovm, LiouvilleMatrix,
    Partition, WeightedMeasure,
};
pub use runner::{run, Report, RunConfig, Scenario};
pub use spectral::{
    euclidean_laplacian_cumulative, landau_spectral_measure, spectral_entropy,
    sphere_eigenspace_dim, sphere_spectral_measure, symbol_measure_montecarlo, Polynomial,
    SpectralMeasure, SpectralState,
};
pub use uncertainty::{
    choi_jensen_deficit, constant_k, constant_k_prime, equality_diagnostics, refinement_gap,
    relative_entropy_term, theorem1_deficit, trace_product_bound, UncertaintyRecord,
};
