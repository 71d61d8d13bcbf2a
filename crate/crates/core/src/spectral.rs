//! Spectral measures of invariant operators on homogeneous spaces.
//!
//! A spectral measure assigns to each energy window the spatial density of
//! the corresponding spectral projector. Closed forms exist for the sphere
//! Laplacian (normalized volume), the Landau Hamiltonian and the Euclidean
//! Laplacian; for general polynomial symbols the measure is the volume of the
//! sublevel sets, estimated by Monte-Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{invalid_param, Error, Result};
use crate::operator::entropy_term;

/// Number of independent sub-streams used by the Monte-Carlo estimator.
/// Fixed so results do not depend on the thread count.
const MONTE_CARLO_SHARDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SpectralMeasure {
    /// Atoms `(λ, mass)` with `λ` strictly ascending and mass > 0.
    Discrete { atoms: Vec<(f64, f64)> },
    /// Histogram on strictly ascending `edges`; `masses[i]` covers
    /// `[edges[i], edges[i+1])`. Empty bins carry mass 0.
    Sampled { edges: Vec<f64>, masses: Vec<f64> },
}

impl SpectralMeasure {
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure {
                reason: "no atoms".into(),
            });
        }
        for (i, &(l, m)) in atoms.iter().enumerate() {
            if !l.is_finite() || !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidMeasure {
                    reason: format!(
                        "atom {i} = ({l}, {m}) needs finite position and positive mass"
                    ),
                });
            }
            if i > 0 && atoms[i - 1].0 >= l {
                return Err(Error::InvalidMeasure {
                    reason: format!("atom positions not strictly ascending at {i}"),
                });
            }
        }
        Ok(SpectralMeasure::Discrete { atoms })
    }

    pub fn sampled(edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || masses.len() + 1 != edges.len() {
            return Err(Error::InvalidMeasure {
                reason: format!("{} edges for {} bins", edges.len(), masses.len()),
            });
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidMeasure {
                reason: "bin edges must be finite and strictly ascending".into(),
            });
        }
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidMeasure {
                reason: "bin masses must be finite and nonnegative".into(),
            });
        }
        Ok(SpectralMeasure::Sampled { edges, masses })
    }

    /// Number of atoms or bins.
    pub fn len(&self) -> usize {
        match self {
            SpectralMeasure::Discrete { atoms } => atoms.len(),
            SpectralMeasure::Sampled { masses, .. } => masses.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(λ, mass)` pairs; a bin is represented by its midpoint.
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            SpectralMeasure::Discrete { atoms } => atoms.clone(),
            SpectralMeasure::Sampled { edges, masses } => edges
                .windows(2)
                .zip(masses)
                .map(|(w, &m)| (0.5 * (w[0] + w[1]), m))
                .collect(),
        }
    }

    pub fn masses(&self) -> Vec<f64> {
        self.points().into_iter().map(|(_, m)| m).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses().iter().sum()
    }

    /// Lowest point carrying positive mass.
    pub fn infimum(&self) -> Option<f64> {
        self.points()
            .into_iter()
            .find(|&(_, m)| m > 0.0)
            .map(|(l, _)| l)
    }

    /// Mass carried at exactly `λ` (zero if no atom sits there).
    pub fn mass_at(&self, lambda: f64) -> f64 {
        self.points()
            .into_iter()
            .filter(|&(l, _)| l == lambda)
            .map(|(_, m)| m)
            .sum()
    }
}

/// Probability weights of a state's spectral distribution, aligned with the
/// atoms (or bins) of a reference spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralState {
    weights: Vec<f64>,
}

impl SpectralState {
    pub fn new(weights: Vec<f64>, reference: &SpectralMeasure) -> Result<Self> {
        if weights.len() != reference.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: reference.len(),
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidMeasure {
                reason: "spectral weights must be nonnegative".into(),
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMeasure {
                reason: format!("spectral weights sum to {total}"),
            });
        }
        for (i, (&w, m)) in weights.iter().zip(reference.masses()).enumerate() {
            if w > 0.0 && m <= 0.0 {
                return Err(Error::AbsoluteContinuity {
                    label: i.to_string(),
                    mass: w,
                });
            }
        }
        Ok(SpectralState { weights })
    }

    /// The normalized reference measure itself.
    pub fn proportional(reference: &SpectralMeasure) -> Self {
        let total = reference.total_mass();
        SpectralState {
            weights: reference.masses().into_iter().map(|m| m / total).collect(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mean energy `Σ λ ν(λ)`.
    pub fn energy(&self, reference: &SpectralMeasure) -> Result<f64> {
        if self.weights.len() != reference.len() {
            return Err(Error::DimensionMismatch {
                left: self.weights.len(),
                right: reference.len(),
            });
        }
        Ok(reference
            .points()
            .iter()
            .zip(&self.weights)
            .map(|((l, _), w)| l * w)
            .sum())
    }
}

/// `-Σ ν_i ln(ν_i / μ_i)`. Depends only on the splitting, not on where the
/// atoms sit.
pub fn spectral_entropy(state: &SpectralState, reference: &SpectralMeasure) -> Result<f64> {
    if state.weights.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            left: state.weights.len(),
            right: reference.len(),
        });
    }
    let mut acc = 0.0;
    for (i, (&w, m)) in state.weights.iter().zip(reference.masses()).enumerate() {
        if w <= 0.0 {
            continue;
        }
        if m <= 0.0 {
            return Err(Error::AbsoluteContinuity {
                label: i.to_string(),
                mass: w,
            });
        }
        acc += entropy_term(w) + w * m.ln();
    }
    Ok(acc)
}

fn binomial(top: i64, k: i64) -> Result<u128> {
    if top < 0 || k < 0 || k > top {
        return Ok(0);
    }
    let k = k.min(top - k) as u128;
    let top = top as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(top - i)
            .ok_or_else(|| invalid_param("degree", "binomial overflow"))?
            / (i + 1);
    }
    Ok(acc)
}

/// Dimension of the degree-`d` spherical harmonics on `S^{n-1} ⊂ R^n`:
/// `C(d+n-1, n-1) - C(d+n-3, n-1)`.
pub fn sphere_eigenspace_dim(n: u32, d: u32) -> Result<u64> {
    if n < 2 {
        return Err(invalid_param("n", format!("ambient dimension {n} < 2")));
    }
    let (n, d) = (n as i64, d as i64);
    let value = binomial(d + n - 1, n - 1)? - binomial(d + n - 3, n - 1)?;
    u64::try_from(value).map_err(|_| invalid_param("degree", "dimension exceeds u64"))
}

/// Atoms `(d(d+n-2), dim E_d)` for `d = 0..=d_max`, unit total volume.
pub fn sphere_spectral_measure(n: u32, d_max: u32) -> Result<SpectralMeasure> {
    let mut atoms = Vec::with_capacity(d_max as usize + 1);
    for d in 0..=d_max {
        let lambda = d as f64 * (d as f64 + n as f64 - 2.0);
        atoms.push((lambda, sphere_eigenspace_dim(n, d)? as f64));
    }
    SpectralMeasure::discrete(atoms)
}

/// Landau levels `((2k+1)B, B/2π)` for `k = 0..=n_max`.
pub fn landau_spectral_measure(b: f64, n_max: u32) -> Result<SpectralMeasure> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(invalid_param(
            "B",
            format!("field strength {b} must be positive"),
        ));
    }
    let density = b / (2.0 * PI);
    SpectralMeasure::discrete(
        (0..=n_max)
            .map(|k| ((2.0 * k as f64 + 1.0) * b, density))
            .collect(),
    )
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// `μ_Δ([0, λ])`: volume of the ball of radius `√λ / 2π` in `R^n`.
pub fn euclidean_laplacian_cumulative(n: u32, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid_param("lambda", format!("{lambda} is negative")));
    }
    let r = lambda.sqrt() / (2.0 * PI);
    Ok(unit_ball_volume(n) * r.powi(n as i32))
}

/// Real polynomial in `nvars` variables, stored as `(coefficient, exponents)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.len() != nvars) {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: nvars,
            });
        }
        Ok(Polynomial { nvars, terms })
    }

    pub fn constant(nvars: usize, value: f64) -> Self {
        Polynomial {
            nvars,
            terms: vec![(value, vec![0; nvars])],
        }
    }

    /// `‖2πξ‖²`, the symbol of the Laplacian under the `e^{-2πixξ}` convention.
    pub fn laplacian_symbol(nvars: usize) -> Self {
        let c = 4.0 * PI * PI;
        let terms = (0..nvars)
            .map(|k| {
                let mut p = vec![0; nvars];
                p[k] = 2;
                (c, p)
            })
            .collect();
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, p)| {
                c * p
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloMeasure {
    pub measure: SpectralMeasure,
    /// One standard error per bin.
    pub std_errors: Vec<f64>,
    pub samples: u64,
}

/// Bin index for `value` in `[edges[i], edges[i+1])`, last bin closed.
fn bin_of(edges: &[f64], value: f64) -> Option<usize> {
    let last = *edges.last()?;
    if !(value >= edges[0]) || value > last {
        return None;
    }
    if value == last {
        return Some(edges.len() - 2);
    }
    Some(edges.partition_point(|&e| e <= value) - 1)
}

/// Estimates `vol{ξ ∈ [-R, R]^n : σ(ξ) ∈ bin}` by uniform sampling.
///
/// The box must contain the preimage of the binned range; this cannot be
/// verified here. Per-bin standard error is `V sqrt(p(1-p)/N)` with `V` the
/// box volume.
pub fn symbol_measure_montecarlo<R: Rng + ?Sized>(
    symbol: &Polynomial,
    half_width: f64,
    samples: u64,
    edges: &[f64],
    rng: &mut R,
) -> Result<MonteCarloMeasure> {
    if samples == 0 {
        return Err(invalid_param("samples", "need at least one sample"));
    }
    if !(half_width > 0.0) {
        return Err(invalid_param(
            "half_width",
            format!("{half_width} must be positive"),
        ));
    }
    // Validates the edges before any sampling.
    SpectralMeasure::sampled(edges.to_vec(), vec![0.0; edges.len().saturating_sub(1)])?;
    let nbins = edges.len() - 1;
    let n = symbol.nvars();
    let seeds: Vec<u64> = (0..MONTE_CARLO_SHARDS).map(|_| rng.random()).collect();
    let per = samples / MONTE_CARLO_SHARDS as u64;
    let extra = samples % MONTE_CARLO_SHARDS as u64;

    let counts = seeds
        .par_iter()
        .enumerate()
        .map(|(shard, &seed)| {
            let count = per + u64::from((shard as u64) < extra);
            let mut local = ChaCha8Rng::seed_from_u64(seed);
            let mut hist = vec![0u64; nbins];
            let mut x = vec![0.0; n];
            for _ in 0..count {
                for xi in x.iter_mut() {
                    *xi = local.random_range(-half_width..half_width);
                }
                if let Some(b) = bin_of(edges, symbol.eval(&x)) {
                    hist[b] += 1;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; nbins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let volume = (2.0 * half_width).powi(n as i32);
    let total = samples as f64;
    let masses: Vec<f64> = counts.iter().map(|&c| volume * c as f64 / total).collect();
    let std_errors = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            volume * (p * (1.0 - p) / total).sqrt()
        })
        .collect();
    Ok(MonteCarloMeasure {
        measure: SpectralMeasure::sampled(edges.to_vec(), masses)?,
        std_errors,
        samples,
    })
}
