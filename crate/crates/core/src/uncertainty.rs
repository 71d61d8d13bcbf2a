//! Entropic uncertainty bookkeeping for pairs of POVMs.
//!
//! For a state `ρ` and POVMs `P`, `Q` whose Liouville matrix is dominated by a
//! product `μ_P ⊗ μ_Q`, the relative-entropy terms of the two measurement
//! distributions together bound the von Neumann entropy from above:
//!
//! ```text
//! -Σ ν_P(i) ln(ν_P(i)/μ_P(i)) - Σ ν_Q(j) ln(ν_Q(j)/μ_Q(j)) >= S(ρ)
//! ```
//!
//! This module evaluates both sides and the intermediate quantities of the
//! argument (trace product bound, operator Jensen step, coarse-graining
//! monotonicity) so each step can be checked numerically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{
    commutator_norm, logm, von_neumann_entropy, DensityMatrix, HermitianOperator,
};
use crate::povm::{
    liouville_matrix, measurement_distribution, povm_coarsen, Basis, FinitePovm, Partition,
    WeightedMeasure,
};

/// `ν` masses at or below this over a zero reference mass are ignored.
pub const NEGLIGIBLE_MASS: f64 = 1e-12;
/// Tolerance for the rank-one, idempotency and commutation diagnostics.
pub const DIAGNOSTIC_TOLERANCE: f64 = 1e-9;

fn check_labels(nu: &WeightedMeasure, mu: &WeightedMeasure) -> Result<()> {
    if nu.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            left: nu.len(),
            right: mu.len(),
        });
    }
    for (index, (a, b)) in nu.labels().iter().zip(mu.labels()).enumerate() {
        if a != b {
            return Err(Error::LabelMismatch {
                index,
                left: a.clone(),
                right: b.clone(),
            });
        }
    }
    Ok(())
}

/// `-Σ_{ν_i > 0} ν_i ln(ν_i / μ_i)`, minus the relative entropy of `ν`
/// with respect to the (not necessarily normalized) reference `μ`.
pub fn relative_entropy_term(nu: &WeightedMeasure, mu: &WeightedMeasure) -> Result<f64> {
    check_labels(nu, mu)?;
    let mut acc = 0.0;
    for ((label, &n), &m) in nu.labels().iter().zip(nu.masses()).zip(mu.masses()) {
        if n <= 0.0 {
            continue;
        }
        if m <= 0.0 {
            if n <= NEGLIGIBLE_MASS {
                continue;
            }
            return Err(Error::AbsoluteContinuity {
                label: label.clone(),
                mass: n,
            });
        }
        acc -= n * (n / m).ln();
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyRecord {
    /// Sum of the two relative-entropy terms.
    pub lhs: f64,
    /// von Neumann entropy of the state.
    pub entropy: f64,
    /// `lhs - entropy`, nonnegative.
    pub deficit: f64,
}

/// Evaluates both sides of the uncertainty inequality after checking that
/// `μ_P ⊗ μ_Q` majorizes the Liouville matrix of `(P, Q)`.
pub fn theorem1_deficit(
    rho: &DensityMatrix,
    p: &FinitePovm,
    q: &FinitePovm,
    mu_p: &WeightedMeasure,
    mu_q: &WeightedMeasure,
) -> Result<UncertaintyRecord> {
    let l = liouville_matrix(p, q)?;
    l.check_majorant(mu_p, mu_q)?;
    let nu_p = measurement_distribution(rho, p)?;
    let nu_q = measurement_distribution(rho, q)?;
    let lhs = relative_entropy_term(&nu_p, mu_p)? + relative_entropy_term(&nu_q, mu_q)?;
    let entropy = von_neumann_entropy(rho);
    Ok(UncertaintyRecord {
        lhs,
        entropy,
        deficit: lhs - entropy,
    })
}

/// `K = -Σ p_i ln μ_P(i) - Σ q_j ln μ_Q(j)`.
pub fn constant_k(
    p: &WeightedMeasure,
    q: &WeightedMeasure,
    mu_p: &WeightedMeasure,
    mu_q: &WeightedMeasure,
) -> Result<f64> {
    fn side(p: &WeightedMeasure, mu: &WeightedMeasure) -> Result<f64> {
        check_labels(p, mu)?;
        let mut acc = 0.0;
        for ((label, &w), &m) in p.labels().iter().zip(p.masses()).zip(mu.masses()) {
            if w <= 0.0 {
                continue;
            }
            if m <= 0.0 {
                if w <= NEGLIGIBLE_MASS {
                    continue;
                }
                return Err(Error::ZeroMajorantMass {
                    label: label.clone(),
                });
            }
            acc -= w * m.ln();
        }
        Ok(acc)
    }
    Ok(side(p, mu_p)? + side(q, mu_q)?)
}

/// `K' = -2 ln max_{i,j} |<e_i, f_j>|`, the state-independent constant.
pub fn constant_k_prime(first: &Basis, second: &Basis) -> Result<f64> {
    let sup = first.overlaps(second)?.max();
    Ok(-2.0 * sup.ln())
}

/// `Σ_{ij} ϱ_P(i) ϱ_Q(j) L(i,j)` with densities `ϱ = ν / μ`; at most 1
/// whenever the majorant is valid.
pub fn trace_product_bound(
    rho: &DensityMatrix,
    p: &FinitePovm,
    q: &FinitePovm,
    mu_p: &WeightedMeasure,
    mu_q: &WeightedMeasure,
) -> Result<f64> {
    let l = liouville_matrix(p, q)?;
    l.check_majorant(mu_p, mu_q)?;
    let density = |nu: &WeightedMeasure, mu: &WeightedMeasure| -> Result<Vec<f64>> {
        check_labels(nu, mu)?;
        Ok(nu
            .masses()
            .iter()
            .zip(mu.masses())
            .map(|(&n, &m)| if m > 0.0 { n / m } else { 0.0 })
            .collect())
    };
    let rp = density(&measurement_distribution(rho, p)?, mu_p)?;
    let rq = density(&measurement_distribution(rho, q)?, mu_q)?;
    let mut acc = 0.0;
    for (i, a) in rp.iter().enumerate() {
        for (j, b) in rq.iter().enumerate() {
            acc += a * b * l.get(i, j);
        }
    }
    Ok(acc)
}

/// Smallest eigenvalue of `Σ_i (-ln w_i) P_i + ln(Σ_i w_i P_i)`.
///
/// Operator convexity of `-ln` makes this nonnegative for every POVM; it
/// vanishes for projection valued measures.
pub fn choi_jensen_deficit(povm: &FinitePovm, weights: &[f64]) -> Result<f64> {
    if weights.len() != povm.len() {
        return Err(Error::DimensionMismatch {
            left: weights.len(),
            right: povm.len(),
        });
    }
    if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let dim = povm.dim();
    let mut neg_log_side = HermitianOperator::zeros(dim);
    let mut mixed = HermitianOperator::zeros(dim);
    for (e, &w) in povm.elements().iter().zip(weights) {
        neg_log_side = neg_log_side.add(&e.scale(-w.ln()))?;
        mixed = mixed.add(&e.scale(w))?;
    }
    let gap = neg_log_side.add(&logm(&mixed)?)?;
    Ok(gap.min_eigenvalue())
}

/// `S_{P'} - S_P` for the coarse-graining of `P` along `partition`, where
/// `S_P = -Σ ν_P ln(ν_P / μ)` and `μ'` must be the pushforward of `μ`.
pub fn refinement_gap(
    rho: &DensityMatrix,
    povm: &FinitePovm,
    partition: &Partition,
    mu: &WeightedMeasure,
    mu_coarse: &WeightedMeasure,
) -> Result<f64> {
    let expected = partition.pushforward(mu)?;
    if expected.len() != mu_coarse.len() {
        return Err(Error::InvalidPartition {
            reason: format!(
                "coarse measure has {} atoms, partition has {}",
                mu_coarse.len(),
                expected.len()
            ),
        });
    }
    for (a, b) in expected.masses().iter().zip(mu_coarse.masses()) {
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::InvalidMeasure {
                reason: format!("coarse measure is not the pushforward: {b} vs {a}"),
            });
        }
    }
    let coarse = povm_coarsen(povm, partition)?;
    let fine_term = relative_entropy_term(&measurement_distribution(rho, povm)?, mu)?;
    let coarse_mu = WeightedMeasure::new(coarse.labels().to_vec(), mu_coarse.masses().to_vec())?;
    let coarse_term = relative_entropy_term(&measurement_distribution(rho, &coarse)?, &coarse_mu)?;
    Ok(coarse_term - fine_term)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityDiagnostics {
    /// Liouville matrix is a product (all 2x2 minors vanish).
    pub independent: bool,
    pub projective_p: bool,
    pub projective_q: bool,
    /// Every `P_i` commutes with every `Q_j`.
    pub commuting: bool,
    pub deficit: f64,
}

/// Flags the structural conditions under which the uncertainty inequality
/// can become an equality, together with the actual deficit.
pub fn equality_diagnostics(
    p: &FinitePovm,
    q: &FinitePovm,
    rho: &DensityMatrix,
    mu_p: &WeightedMeasure,
    mu_q: &WeightedMeasure,
) -> Result<EqualityDiagnostics> {
    let l = liouville_matrix(p, q)?;
    let (m, n) = (l.nrows(), l.ncols());
    let mut independent = true;
    'outer: for i in 0..m {
        for k in (i + 1)..m {
            for j in 0..n {
                for jj in (j + 1)..n {
                    let minor = l.get(i, j) * l.get(k, jj) - l.get(i, jj) * l.get(k, j);
                    if minor.abs() > DIAGNOSTIC_TOLERANCE {
                        independent = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let commuting = p.elements().iter().all(|a| {
        q.elements()
            .iter()
            .all(|b| commutator_norm(a.matrix(), b.matrix()) < DIAGNOSTIC_TOLERANCE)
    });
    let record = theorem1_deficit(rho, p, q, mu_p, mu_q)?;
    Ok(EqualityDiagnostics {
        independent,
        projective_p: p.is_projective(DIAGNOSTIC_TOLERANCE),
        projective_q: q.is_projective(DIAGNOSTIC_TOLERANCE),
        commuting,
        deficit: record.deficit,
    })
}
