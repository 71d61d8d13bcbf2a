//! Desk-scale function-space realizations of the uncertainty bounds.
//!
//! * Hermite line: thermal oscillator states on `L²(R)`, where the Hermite
//!   functions diagonalize the Fourier transform `F f(ξ) = ∫ f(x) e^{-2πixξ} dx`
//!   with eigenvalues `(-i)^k`, so position and momentum densities coincide.
//! * Circle: states on trigonometric polynomials of degree `<= K` over the
//!   unit-volume circle, split spatially and by Laplacian eigenspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{invalid_param, Error, Result};
use crate::logsobolev::LaplaceCurve;
use crate::operator::{c, max_abs, shannon_entropy, CMatrix};
use crate::random::{random_probabilities, random_unitary};
use crate::spectral::{spectral_entropy, sphere_spectral_measure, SpectralState};

/// Largest Hermite index for which the recurrence is used.
pub const HERMITE_MAX_INDEX: usize = 200;
/// Default number of quadrature nodes on the line.
pub const DEFAULT_GRID_POINTS: usize = 4001;
/// Relative thermal tail allowed beyond the Hermite cutoff.
pub const HERMITE_TAIL_TOLERANCE: f64 = 1e-10;
const QUADRATURE_MASS_TOLERANCE: f64 = 1e-4;
const CIRCLE_MASS_TOLERANCE: f64 = 1e-9;

/// `φ_0..=φ_{k_max}` at `x`, with `φ_k(x) = (2π)^{1/4} ψ_k(√(2π) x)` and
/// `ψ_k` the L²-normalized Hermite functions.
pub fn hermite_functions_upto(k_max: usize, x: f64) -> Result<Vec<f64>> {
    if k_max > HERMITE_MAX_INDEX {
        return Err(invalid_param(
            "k",
            format!("{k_max} exceeds the stable range 0..={HERMITE_MAX_INDEX}"),
        ));
    }
    let y = (2.0 * PI).sqrt() * x;
    let scale = (2.0 * PI).powf(0.25);
    let mut out = Vec::with_capacity(k_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(scale * cur);
    for k in 0..k_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(scale * cur);
    }
    Ok(out)
}

pub fn hermite_function(k: usize, x: f64) -> Result<f64> {
    Ok(*hermite_functions_upto(k, x)?.last().expect("k + 1 values"))
}

/// Odd number of equispaced nodes on `[a, b]`, integrated by composite
/// Simpson.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    a: f64,
    b: f64,
    points: usize,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, points: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(invalid_param(
                "grid",
                format!("[{a}, {b}] is not a finite interval"),
            ));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(invalid_param(
                "points",
                format!("{points} must be odd and >= 3"),
            ));
        }
        Ok(UniformGrid { a, b, points })
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.a + h * i as f64).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points)
            .map(|i| {
                let w = if i == 0 || i == self.points - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h / 3.0
            })
            .collect()
    }

    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.points {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: self.points,
            });
        }
        Ok(values.iter().zip(self.weights()).map(|(v, w)| v * w).sum())
    }
}

/// `-∫ ϱ ln ϱ` by Simpson, `0 ln 0 = 0`.
pub fn quadrature_entropy(density: &[f64], grid: &UniformGrid) -> Result<f64> {
    if let Some(v) = density.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::InvalidMeasure {
            reason: format!("density sample {v} is negative"),
        });
    }
    let mass = grid.integrate(density)?;
    if (mass - 1.0).abs() > QUADRATURE_MASS_TOLERANCE {
        return Err(Error::GridTooCoarse { mass });
    }
    let integrand: Vec<f64> = density
        .iter()
        .map(|&r| if r > 0.0 { -r * r.ln() } else { 0.0 })
        .collect();
    grid.integrate(&integrand)
}

/// Smallest cutoff whose thermal tail `e^{-2t(k_max+1)}` is below the
/// tolerance.
pub fn hermite_default_cutoff(t: f64) -> Result<usize> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid_param("t", format!("{t} must be positive")));
    }
    let k = ((-HERMITE_TAIL_TOLERANCE.ln()) / (2.0 * t)).floor() as usize;
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteRecord {
    pub t: f64,
    pub k_max: usize,
    /// `-∫ ϱ ln ϱ`; the momentum density is the same function.
    pub spatial_entropy: f64,
    pub spectral_entropy: f64,
    /// von Neumann entropy of the truncated thermal state.
    pub entropy: f64,
    /// `Σ p_k π(2k+1)`, the Laplacian energy under the `e^{-2πixξ}` convention.
    pub energy: f64,
    /// `-2∫ ϱ ln ϱ - S`.
    pub fourier_deficit: f64,
    /// `-∫ ϱ ln ϱ + ½ ln(eE/2π) - S`.
    pub log_sobolev_deficit: f64,
}

/// Thermal oscillator state with occupation `p_k ∝ e^{-t(2k+1)}`,
/// `k = 0..=k_max`, integrated on `points` Simpson nodes.
pub fn hermite_scenario(t: f64, k_max: usize, points: usize) -> Result<HermiteRecord> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid_param("t", format!("{t} must be positive")));
    }
    let tail = (-2.0 * t * (k_max as f64 + 1.0)).exp();
    if tail >= HERMITE_TAIL_TOLERANCE {
        return Err(Error::Truncation { tail });
    }
    let raw: Vec<f64> = (0..=k_max).map(|k| (-2.0 * t * k as f64).exp()).collect();
    let z: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|w| w / z).collect();

    let half_width = (((2 * k_max + 1) as f64).sqrt() + 8.0) / (2.0 * PI).sqrt();
    let grid = UniformGrid::new(-half_width, half_width, points)?;
    let density = grid
        .nodes()
        .iter()
        .map(|&x| {
            let phi = hermite_functions_upto(k_max, x)?;
            Ok(phi.iter().zip(&p).map(|(f, w)| w * f * f).sum())
        })
        .collect::<Result<Vec<f64>>>()?;
    let spatial = quadrature_entropy(&density, &grid)?;
    let entropy = shannon_entropy(&p);
    let energy = PI
        * p.iter()
            .enumerate()
            .map(|(k, w)| w * (2 * k + 1) as f64)
            .sum::<f64>();
    Ok(HermiteRecord {
        t,
        k_max,
        spatial_entropy: spatial,
        spectral_entropy: spatial,
        entropy,
        energy,
        fourier_deficit: 2.0 * spatial - entropy,
        log_sobolev_deficit: spatial + 0.5 * (1f64.exp() * energy / (2.0 * PI)).ln() - entropy,
    })
}

/// Mixed state on `span{e^{ikθ} : |k| <= K}`: eigenvalues `weights` with
/// eigenvectors the columns of `unitary` in the mode basis `k = -K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleState {
    cutoff: usize,
    weights: Vec<f64>,
    unitary: CMatrix,
}

impl CircleState {
    pub fn new(cutoff: usize, weights: Vec<f64>, unitary: CMatrix) -> Result<Self> {
        let dim = 2 * cutoff + 1;
        if weights.len() != dim || unitary.nrows() != dim || unitary.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: dim,
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(Error::NotDensity {
                reason: "eigenvalues must form a probability vector".into(),
            });
        }
        let gram = unitary.adjoint() * &unitary;
        let dev = max_abs(&(gram - CMatrix::identity(dim, dim)));
        if dev > 1e-10 {
            return Err(Error::NotOrthonormal { max_deviation: dev });
        }
        Ok(CircleState {
            cutoff,
            weights,
            unitary,
        })
    }

    /// `ρ = φ(Δ)`: level weights `w_0..=w_K` spread evenly over each
    /// eigenspace `{e^{±ikθ}}`.
    pub fn spectral(level_weights: &[f64]) -> Result<Self> {
        if level_weights.is_empty() {
            return Err(invalid_param("level_weights", "empty"));
        }
        let cutoff = level_weights.len() - 1;
        let weights = (0..=2 * cutoff)
            .map(|i| {
                let k = i.abs_diff(cutoff);
                if k == 0 {
                    level_weights[0]
                } else {
                    level_weights[k] / 2.0
                }
            })
            .collect();
        Self::new(
            cutoff,
            weights,
            CMatrix::identity(2 * cutoff + 1, 2 * cutoff + 1),
        )
    }

    pub fn random<R: Rng + ?Sized>(cutoff: usize, rng: &mut R) -> Result<Self> {
        let dim = 2 * cutoff + 1;
        let weights = random_probabilities(dim, rng);
        Self::new(cutoff, weights, random_unitary(dim, rng))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Diagonal of `ρ` in the mode basis, indexed by `k + K`.
    pub fn mode_occupations(&self) -> Vec<f64> {
        let dim = 2 * self.cutoff + 1;
        (0..dim)
            .map(|row| {
                self.weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * self.unitary[(row, i)].norm_sqr())
                    .sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleRecord {
    pub cutoff: usize,
    /// `-∫ ϱ ln ϱ dμ` with `μ(S¹) = 1`.
    pub spatial_entropy: f64,
    /// Relative to the eigenspace dimensions `1, 2, 2, ...`.
    pub spectral_entropy: f64,
    /// Shannon entropy of the individual mode occupations.
    pub refined_entropy: f64,
    pub entropy: f64,
    /// `Σ k² ρ_kk`.
    pub energy: f64,
    pub compact_deficit: f64,
    /// `spatial + tE + ln L(t) - S` at the requested `t`.
    pub parametric_deficit: f64,
    pub t: f64,
}

/// `Σ_{k ∈ Z} e^{-tk²}`.
fn circle_heat_trace_ln(t: f64) -> Result<f64> {
    // Terms beyond |k| = K_t are below e^{-40} relative.
    let k_t = ((40.0 / t).sqrt().ceil() as u32).max(1);
    LaplaceCurve::Measure(sphere_spectral_measure(2, k_t)?).ln_laplace(t)
}

/// Evaluates both sides of the compact-space bound for `state` on a periodic
/// grid of `points` nodes, plus the parametric log-Sobolev form at `t`.
pub fn circle_scenario(state: &CircleState, points: usize, t: f64) -> Result<CircleRecord> {
    let cutoff = state.cutoff;
    let dim = 2 * cutoff + 1;
    if points <= 2 * cutoff {
        return Err(Error::GridTooCoarse { mass: f64::NAN });
    }
    let coefficients: Vec<DVector<Complex64>> = (0..dim)
        .map(|i| state.unitary.column(i).into_owned())
        .collect();
    let mut density = Vec::with_capacity(points);
    for j in 0..points {
        let theta = 2.0 * PI * j as f64 / points as f64;
        let modes: Vec<Complex64> = (0..dim)
            .map(|m| Complex64::from_polar(1.0, (m as f64 - cutoff as f64) * theta))
            .collect();
        let mut rho = 0.0;
        for (w, col) in state.weights.iter().zip(&coefficients) {
            if *w == 0.0 {
                continue;
            }
            let f: Complex64 = col.iter().zip(&modes).map(|(a, e)| a * e).sum();
            rho += w * f.norm_sqr();
        }
        density.push(rho);
    }
    let mass = density.iter().sum::<f64>() / points as f64;
    if (mass - 1.0).abs() > CIRCLE_MASS_TOLERANCE {
        return Err(Error::GridTooCoarse { mass });
    }
    let spatial = density
        .iter()
        .map(|&r| if r > 0.0 { -r * r.ln() } else { 0.0 })
        .sum::<f64>()
        / points as f64;

    let occupation = state.mode_occupations();
    let mut levels = vec![occupation[cutoff]];
    for k in 1..=cutoff {
        levels.push(occupation[cutoff + k] + occupation[cutoff - k]);
    }
    let level_total: f64 = levels.iter().sum();
    for l in levels.iter_mut() {
        *l /= level_total;
    }
    let mu = sphere_spectral_measure(2, cutoff as u32)?;
    let spectral = spectral_entropy(&SpectralState::new(levels, &mu)?, &mu)?;
    let refined = shannon_entropy(&occupation);
    let entropy = shannon_entropy(&state.weights);
    let energy = occupation
        .iter()
        .enumerate()
        .map(|(m, w)| {
            let k = m as f64 - cutoff as f64;
            k * k * w
        })
        .sum::<f64>();
    let ln_l = circle_heat_trace_ln(t)?;
    Ok(CircleRecord {
        cutoff,
        spatial_entropy: spatial,
        spectral_entropy: spectral,
        refined_entropy: refined,
        entropy,
        energy,
        compact_deficit: spatial + spectral - entropy,
        parametric_deficit: spatial + t * energy + ln_l - entropy,
        t,
    })
}

/// Density matrix of a circle state in the mode basis.
pub fn circle_density(state: &CircleState) -> CMatrix {
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        state.weights.len(),
        state.weights.iter().map(|&w| c(w)),
    ));
    &state.unitary * d * state.unitary.adjoint()
}
