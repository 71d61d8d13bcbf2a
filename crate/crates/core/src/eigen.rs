//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real symmetric Jacobi rotation. The
//! accumulated product of the 2x2 unitaries gives the eigenvectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the full Frobenius norm (floor 1).
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(f(λ)) U*`.
    pub fn compose(&self, values: &[f64]) -> DMatrix<Complex64> {
        let u = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        scaled * u.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        self.compose(&self.eigenvalues)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a matrix assumed Hermitian. Only the Hermitian part is
/// meaningful; callers validate symmetry beforehand.
pub fn jacobi_hermitian(input: &DMatrix<Complex64>) -> EigenDecomposition {
    let n = input.nrows();
    let mut a = input.clone();
    let mut u = DMatrix::<Complex64>::identity(n, n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let threshold = OFF_DIAGONAL_TOLERANCE * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // V = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let v00 = Complex64::new(c, 0.0);
                let v01 = Complex64::new(s, 0.0);
                let v10 = -phase.conj() * s;
                let v11 = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * v00 + akq * v10;
                    a[(k, q)] = akp * v01 + akq * v11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = v00.conj() * apk + v10.conj() * aqk;
                    a[(q, k)] = v01.conj() * apk + v11.conj() * aqk;
                }
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = ukp * v00 + ukq * v10;
                    u[(k, q)] = ukp * v01 + ukq * v11;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &u.column(src));
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}
