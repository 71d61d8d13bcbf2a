//! Random operators: Haar unitaries, Gaussian Hermitian matrices, random
//! mixed states, and seed derivation for batch runs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, DensityMatrix, HermitianOperator};

/// Complex Gaussian matrix with independent `N(0, 1/2) + i N(0, 1/2)` entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let z = complex_gaussian(dim, dim, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `(G + G*) / 2` scaled so entries have standard deviation about `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> HermitianOperator {
    let g = complex_gaussian(dim, dim, rng);
    HermitianOperator::hermitize((&g + g.adjoint()) * c(scale * std::f64::consts::FRAC_1_SQRT_2))
}

/// `G G* / tr(G G*)` with `G` a `dim x rank` complex Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let g = complex_gaussian(dim, rank, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(HermitianOperator::hermitize(gg * c(1.0 / tr)))
}

/// A probability vector drawn uniformly from the simplex.
pub fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// SplitMix64 finalizer; derives independent per-instance seeds from one
/// master seed and an instance counter.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::von_neumann_entropy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=12 {
            let u = random_unitary(d, &mut rng);
            let gram = u.adjoint() * &u;
            assert!((gram - CMatrix::identity(d, d)).map(|z| z.norm()).max() < 1e-10);
        }
    }

    #[test]
    fn one_dimensional_unitary_is_a_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_density_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density(3, 1, &mut rng).unwrap();
        assert!(von_neumann_entropy(&rho).abs() < 1e-10);
    }

    #[test]
    fn rank_out_of_range_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert_eq!(
            random_density(3, 4, &mut rng).unwrap_err(),
            Error::InvalidRank { rank: 4, dim: 3 }
        );
    }

    #[test]
    fn mixed_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| mix_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn haar_first_moment() {
        // E|U_00|^2 = 1/d for Haar measure.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let d = 3;
        let n = 4000;
        let mean: f64 = (0..n)
            .map(|_| random_unitary(d, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.02, "{mean}");
    }
}
