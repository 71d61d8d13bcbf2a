//! Reference computations that avoid the library's own code paths.
//!
//! Eigenvalues come from nalgebra's Hermitian solver rather than the Jacobi
//! routine, distributions are read straight off matrix entries, and
//! dimensions are counted by exact integer linear algebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub type CMat = DMatrix<Complex64>;

/// Eigenvalues of a Hermitian matrix via nalgebra, ascending.
pub fn eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

pub fn von_neumann(rho: &CMat) -> f64 {
    shannon(
        &eigenvalues(rho)
            .into_iter()
            .map(|x| x.max(0.0))
            .collect::<Vec<_>>(),
    )
}

/// `<b_i, ρ b_i>` for the columns of `basis`.
pub fn basis_distribution(rho: &CMat, basis: &CMat) -> Vec<f64> {
    (0..basis.ncols())
        .map(|i| {
            let v = basis.column(i);
            (v.adjoint() * rho * v)[(0, 0)].re
        })
        .collect()
}

/// `max_{i,j} |<e_i, f_j>|`.
pub fn max_overlap(e: &CMat, f: &CMat) -> f64 {
    (e.adjoint() * f)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Uncertainty sum for a basis pair with the majorant `μ_P(i) = max_j |<e_i,f_j>|`,
/// `μ_Q(j) = max_i |<e_i,f_j>|`, computed from matrix entries.
pub fn basis_pair_lhs(rho: &CMat, e: &CMat, f: &CMat) -> f64 {
    let g = e.adjoint() * f;
    let d = g.nrows();
    let mu_p: Vec<f64> = (0..d)
        .map(|i| (0..d).map(|j| g[(i, j)].norm()).fold(0.0, f64::max))
        .collect();
    let mu_q: Vec<f64> = (0..d)
        .map(|j| (0..d).map(|i| g[(i, j)].norm()).fold(0.0, f64::max))
        .collect();
    let term = |nu: &[f64], mu: &[f64]| -> f64 {
        nu.iter()
            .zip(mu)
            .filter(|(n, _)| **n > 0.0)
            .map(|(n, m)| -n * (n / m).ln())
            .sum()
    };
    term(&basis_distribution(rho, e), &mu_p) + term(&basis_distribution(rho, f), &mu_q)
}

/// DFT basis `F_jk = ω^{jk} / sqrt(d)`.
pub fn dft(d: usize) -> CMat {
    let s = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |j, k| {
        Complex64::from_polar(s, 2.0 * PI * (j * k) as f64 / d as f64)
    })
}

/// Matrix exponential of a Hermitian matrix through nalgebra's eigensolver.
pub fn expm_hermitian(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let u = eig.eigenvectors;
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.exp(), 0.0)));
    &u * d * u.adjoint()
}

/// Exponents of all monomials of total degree `d` in `n` variables.
fn monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Dimension of harmonic homogeneous polynomials of degree `d` on `R^n`:
/// `dim P_d - rank(Δ : P_d -> P_{d-2})`.
pub fn harmonic_dimension(n: usize, d: usize) -> u64 {
    let source = monomials(n, d);
    if d < 2 {
        return source.len() as u64;
    }
    let target = monomials(n, d - 2);
    let index_of = |m: &Vec<usize>| target.iter().position(|t| t == m).expect("target monomial");
    let mut matrix = vec![vec![0i128; source.len()]; target.len()];
    for (col, mono) in source.iter().enumerate() {
        for k in 0..n {
            if mono[k] >= 2 {
                let mut image = mono.clone();
                image[k] -= 2;
                matrix[index_of(&image)][col] += (mono[k] * (mono[k] - 1)) as i128;
            }
        }
    }
    (source.len() - integer_rank(matrix)) as u64
}

/// `-2∫ϱ ln ϱ` for the thermal oscillator state `p_k ∝ e^{-t(2k+1)}`: the
/// density is a centred Gaussian of variance `coth(t) / 4π`.
pub fn thermal_double_spatial_entropy(t: f64) -> f64 {
    1.0 + (1.0 / t.tanh() / 2.0).ln()
}

/// von Neumann entropy of the thermal state with `p_k ∝ e^{-2tk}`.
pub fn thermal_entropy(t: f64) -> f64 {
    let beta = 2.0 * t;
    beta / beta.exp_m1() - (-(-beta).exp_m1()).ln()
}

/// Area of the disk of radius `sqrt(λ) / 2π`.
pub fn disk_area(lambda: f64) -> f64 {
    lambda / (4.0 * PI)
}
