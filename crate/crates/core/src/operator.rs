//! Dense Hermitian operators, density matrices, matrix functions, and the
//! Gibbs / Golden–Thompson deficits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::{jacobi_hermitian, EigenDecomposition};
use crate::error::{Error, Result};

/// Absolute tolerance on `a_ij - conj(a_ji)` accepted at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Lowest eigenvalue accepted for a density matrix; values in
/// `[-DENSITY_EIGEN_FLOOR, 0)` are clamped to zero for entropies.
pub const DENSITY_EIGEN_FLOOR: f64 = 1e-10;
pub const DENSITY_TRACE_TOLERANCE: f64 = 1e-10;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entrywise `|a_ij - conj(a_ji)|`.
pub fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness and Hermitian symmetry within
    /// [`HERMITIAN_TOLERANCE`], then stores the exactly Hermitian part.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::Empty);
        }
        let asym = max_asymmetry(&mat);
        if !(asym <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self::hermitize(mat))
    }

    /// Symmetrizes a matrix known to be Hermitian up to rounding.
    pub(crate) fn hermitize(mat: CMatrix) -> Self {
        let adj = mat.adjoint();
        HermitianOperator {
            mat: (mat + adj) * c(0.5),
        }
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        HermitianOperator { mat: m }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    /// Rank-one projector onto the span of `v` (normalized internally).
    pub fn projector(v: &nalgebra::DVector<Complex64>) -> Self {
        let norm2 = v.norm_squared();
        Self::hermitize(v * v.adjoint() / c(norm2))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        trace(&self.mat).re
    }

    pub fn eig(&self) -> EigenDecomposition {
        eig_hermitian(self)
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        check_dims(self.dim(), other.dim())?;
        Ok(HermitianOperator {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat * c(s),
        }
    }

    /// `U A U*` for a unitary (or isometry) `U`.
    pub fn conjugate(&self, u: &CMatrix) -> HermitianOperator {
        Self::hermitize(u * &self.mat * u.adjoint())
    }

    /// `W* A W`, compression onto the columns of `W`.
    pub fn compress(&self, w: &CMatrix) -> HermitianOperator {
        Self::hermitize(w.adjoint() * &self.mat * w)
    }

    /// `tr(A B)`, real for Hermitian pairs.
    pub fn trace_with(&self, other: &HermitianOperator) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(trace_product(&self.mat, &other.mat).re)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().eigenvalues[0]
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Positive semidefinite Hermitian operator of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if !((tr - 1.0).abs() <= DENSITY_TRACE_TOLERANCE) {
            return Err(Error::NotDensity {
                reason: format!("trace {tr} differs from 1"),
            });
        }
        let min = op.min_eigenvalue();
        if min < -DENSITY_EIGEN_FLOOR {
            return Err(Error::NotDensity {
                reason: format!("eigenvalue {min:e} is negative"),
            });
        }
        Ok(DensityMatrix { op })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probs))
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Pure state `|v><v|` (normalized).
    pub fn pure(v: &nalgebra::DVector<Complex64>) -> Self {
        DensityMatrix {
            op: HermitianOperator::projector(v),
        }
    }

    /// `Σ p_i |u_i><u_i|` over the columns of a unitary.
    pub fn from_spectrum(u: &CMatrix, probs: &[f64]) -> Result<Self> {
        let eig = EigenDecomposition {
            eigenvalues: probs.to_vec(),
            eigenvectors: u.clone(),
        };
        Self::new(HermitianOperator::hermitize(eig.reconstruct()))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn conjugate(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix {
            op: self.op.conjugate(u),
        }
    }

    /// Eigenvalues clamped into `[0, 1]`.
    pub fn spectrum(&self) -> Vec<f64> {
        self.op
            .eig()
            .eigenvalues
            .into_iter()
            .map(|v| v.clamp(0.0, 1.0))
            .collect()
    }

    /// Operator norm, the largest eigenvalue.
    pub fn largest_eigenvalue(&self) -> f64 {
        self.spectrum().last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition with ascending eigenvalues and orthonormal columns.
pub fn eig_hermitian(a: &HermitianOperator) -> EigenDecomposition {
    jacobi_hermitian(a.matrix())
}

/// `U diag(f(λ)) U*`; fails if `f` is not finite at some eigenvalue.
pub fn matrix_function<F>(a: &HermitianOperator, f: F) -> Result<HermitianOperator>
where
    F: Fn(f64) -> f64,
{
    apply_to_eig(&a.eig(), f)
}

fn apply_to_eig<F>(eig: &EigenDecomposition, f: F) -> Result<HermitianOperator>
where
    F: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(eig.dim());
    for &lambda in &eig.eigenvalues {
        let v = f(lambda);
        if !v.is_finite() {
            return Err(Error::Domain { eigenvalue: lambda });
        }
        values.push(v);
    }
    Ok(HermitianOperator::hermitize(eig.compose(&values)))
}

/// Matrix exponential; fails only on overflow.
pub fn expm(a: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_function(a, f64::exp)
}

/// Principal logarithm; requires a positive definite operator.
pub fn logm(a: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_function(a, f64::ln)
}

/// `-p ln p` with `0 ln 0 = 0`.
pub fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

/// Shannon entropy in nats of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| entropy_term(p)).sum()
}

/// `S(ρ) = -tr(ρ ln ρ)`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.spectrum())
}

/// `ln Σ exp(x_i)` without overflow.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln tr(e^{-A})`.
pub fn log_partition(a: &HermitianOperator) -> f64 {
    log_sum_exp(a.eig().eigenvalues.iter().map(|l| -l))
}

/// The Gibbs state `e^{-A} / tr(e^{-A})`.
pub fn gibbs_state(a: &HermitianOperator) -> DensityMatrix {
    let eig = a.eig();
    let z = log_sum_exp(eig.eigenvalues.iter().map(|l| -l));
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|l| (-l - z).exp()).collect();
    DensityMatrix {
        op: HermitianOperator::hermitize(eig.compose(&weights)),
    }
}

/// `tr(Aρ) - S(ρ) + ln tr(e^{-A})`, nonnegative by the Gibbs variational
/// principle, zero exactly at the Gibbs state of `A`.
pub fn gibbs_deficit(a: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    let energy = a.trace_with(rho.operator())?;
    Ok(energy - von_neumann_entropy(rho) + log_partition(a))
}

/// `tr(e^{A/2} e^B e^{A/2}) - tr(e^{A+B})`, nonnegative by Golden–Thompson.
pub fn golden_thompson_deficit(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let half = expm(&a.scale(0.5))?;
    let eb = expm(b)?;
    let sandwiched = trace_product(&(half.matrix() * eb.matrix()), half.matrix()).re;
    let sum = expm(&a.add(b)?)?.trace();
    Ok(sandwiched - sum)
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::hermitize(a.matrix().kronecker(b.matrix()))
}

pub fn tensor_density(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix {
        op: tensor(a.operator(), b.operator()),
    }
}

/// Commutator `[A, B]` max-entry norm.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{E, LN_2};

    #[test]
    fn identity_eigenvalues() {
        let e = eig_hermitian(&HermitianOperator::identity(3));
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvectors_are_a_permutation() {
        let e = eig_hermitian(&HermitianOperator::from_real_diagonal(&[2.0, -1.0]));
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
        let u = &e.eigenvectors;
        assert!(u[(0, 0)].norm() < 1e-15 && (u[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(u[(1, 1)].norm() < 1e-15 && (u[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_seed_7() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(4, 1.0, &mut rng);
        let e = eig_hermitian(&a);
        let scale = e.max_abs_eigenvalue().max(1.0);
        assert!((e.reconstruct() - a.matrix()).map(|z| z.norm()).max() < 1e-10 * scale);
        let gram = e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!((gram - CMatrix::identity(4, 4)).map(|z| z.norm()).max() < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected_with_asymmetry() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(0.5);
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { max_asymmetry }) => {
                assert!((max_asymmetry - 0.5).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = expm(&HermitianOperator::zeros(3)).unwrap();
        assert!(
            (e.matrix() - CMatrix::identity(3, 3))
                .map(|z| z.norm())
                .max()
                < 1e-15
        );
    }

    #[test]
    fn ln_of_diag_1_e() {
        let l = logm(&HermitianOperator::from_real_diagonal(&[1.0, E])).unwrap();
        assert!(
            (l.matrix() - HermitianOperator::from_real_diagonal(&[0.0, 1.0]).matrix())
                .map(|z| z.norm())
                .max()
                < 1e-15
        );
    }

    #[test]
    fn ln_domain_error_names_eigenvalue() {
        let err = logm(&HermitianOperator::from_real_diagonal(&[1.0, -2.0])).unwrap_err();
        assert_eq!(err, Error::Domain { eigenvalue: -2.0 });
    }

    #[test]
    fn exp_ln_round_trip_seed_3() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_hermitian(4, 1.0, &mut rng);
        // G^2 + I is positive definite.
        let a = HermitianOperator::hermitize(g.matrix() * g.matrix() + CMatrix::identity(4, 4));
        let back = expm(&logm(&a).unwrap()).unwrap();
        assert!((back.matrix() - a.matrix()).map(|z| z.norm()).max() < 1e-9);
    }

    #[test]
    fn entropy_examples() {
        let mut v = nalgebra::DVector::<Complex64>::zeros(3);
        v[0] = c(1.0);
        assert!(von_neumann_entropy(&DensityMatrix::pure(&v)).abs() < 1e-15);
        assert!(
            (von_neumann_entropy(&DensityMatrix::maximally_mixed(4)) - 4f64.ln()).abs() < 1e-14
        );
        let rho = DensityMatrix::diagonal(&[0.5, 0.25, 0.25]).unwrap();
        // -Σ p ln p = ½ln2 + 2·¼·ln4 = 1.5 ln 2
        assert!((von_neumann_entropy(&rho) - 1.5 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::diagonal(&[0.6, 0.6]),
            Err(Error::NotDensity { .. })
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[1.5, -0.5]),
            Err(Error::NotDensity { .. })
        ));
    }

    #[test]
    fn gibbs_equality_at_gibbs_state() {
        let a = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        let rho = gibbs_state(&a);
        assert!(gibbs_deficit(&a, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn gibbs_with_zero_hamiltonian() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rho = random_density(3, 3, &mut rng).unwrap();
        let d = gibbs_deficit(&HermitianOperator::zeros(3), &rho).unwrap();
        assert!((d - (3f64.ln() - von_neumann_entropy(&rho))).abs() < 1e-12);
        assert!(d >= 0.0);
    }

    #[test]
    fn gibbs_random_seed_11() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(5, 1.0, &mut rng);
        let rho = random_density(5, 3, &mut rng).unwrap();
        assert!(gibbs_deficit(&a, &rho).unwrap() >= 0.0);
    }

    #[test]
    fn golden_thompson_cases() {
        let a = HermitianOperator::from_real_diagonal(&[0.3, -1.0, 2.0]);
        let b = HermitianOperator::from_real_diagonal(&[1.0, 0.5, -0.7]);
        assert!(golden_thompson_deficit(&a, &b).unwrap().abs() < 1e-10);
        assert!(golden_thompson_deficit(&a, &a).unwrap().abs() < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_hermitian(4, 1.0, &mut rng);
        let b = random_hermitian(4, 1.0, &mut rng);
        assert!(golden_thompson_deficit(&a, &b).unwrap() >= 0.0);

        assert!(matches!(
            golden_thompson_deficit(&a, &HermitianOperator::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_of_identity_and_diag() {
        let t = tensor(
            &HermitianOperator::identity(2),
            &HermitianOperator::from_real_diagonal(&[1.0, 2.0]),
        );
        assert_eq!(
            t,
            HermitianOperator::from_real_diagonal(&[1.0, 2.0, 1.0, 2.0])
        );
    }

    #[test]
    fn entropy_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(5, 4, &mut rng).unwrap();
        let u = random_unitary(5, &mut rng);
        let moved = rho.conjugate(&u);
        assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&moved)).abs() < 1e-9);
    }
}
