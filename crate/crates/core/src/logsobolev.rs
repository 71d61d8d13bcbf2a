//! Laplace transforms of spectral measures and the entropy-energy bounds
//! built from them.
//!
//! `L(t) = ∫ e^{-tλ} dμ_A(λ)` is log-convex, and Gibbs' inequality gives
//! `S_A(ν) <= t E(ν) + ln L(t)` for every `t > 0`. Optimizing in `t` yields
//! the Legendre transform `(ln L)^*(E) = inf_t (tE + ln L(t))`, which is
//! compared here against the concave hull of `ln F` where
//! `F(λ) = μ_A(]-∞, λ[)`.

use serde::Serialize;
use std::f64::consts::{LN_2, PI};

use crate::error::{invalid_param, Error, Result};
use crate::operator::log_sum_exp;
use crate::spectral::{
    euclidean_laplacian_cumulative, landau_spectral_measure, spectral_entropy, SpectralMeasure,
    SpectralState,
};

/// Left end of the Legendre search bracket in `t`.
pub const LEGENDRE_T_MIN: f64 = 1e-8;
/// Golden-section stops once the bracket is this narrow in `t`.
pub const LEGENDRE_T_TOLERANCE: f64 = 1e-9;
const LEGENDRE_T_CAP: f64 = 1e12;
const LEGENDRE_MAX_ITER: usize = 500;
/// Relative slack for treating `E` as sitting at the spectral infimum.
const INFIMUM_SLACK: f64 = 1e-12;

/// `ln sinh(x)` for `x > 0` without overflow.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid_param(
            "t",
            format!("{t} must be positive and finite"),
        ))
    }
}

/// A spectral measure, or one of the closed-form heat traces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LaplaceCurve {
    Measure(SpectralMeasure),
    /// Laplacian on `R^n`: `L(t) = (4πt)^{-n/2}`.
    Euclidean {
        n: u32,
    },
    /// Landau Hamiltonian with field `B`: `L(t) = B / (4π sinh(Bt))`.
    Landau {
        b: f64,
    },
}

impl LaplaceCurve {
    pub fn euclidean(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid_param("n", "dimension must be positive"));
        }
        Ok(LaplaceCurve::Euclidean { n })
    }

    pub fn landau(b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(invalid_param(
                "B",
                format!("field strength {b} must be positive"),
            ));
        }
        Ok(LaplaceCurve::Landau { b })
    }

    pub fn ln_laplace(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(match self {
            LaplaceCurve::Measure(mu) => log_sum_exp(
                mu.points()
                    .into_iter()
                    .filter(|&(_, m)| m > 0.0)
                    .map(|(l, m)| m.ln() - t * l),
            ),
            LaplaceCurve::Euclidean { n } => -0.5 * *n as f64 * (4.0 * PI * t).ln(),
            LaplaceCurve::Landau { b } => (b / (4.0 * PI)).ln() - ln_sinh(b * t),
        })
    }

    /// Bottom of the spectrum carrying mass.
    pub fn infimum(&self) -> f64 {
        match self {
            LaplaceCurve::Measure(mu) => mu.infimum().unwrap_or(f64::INFINITY),
            LaplaceCurve::Euclidean { .. } => 0.0,
            LaplaceCurve::Landau { b } => *b,
        }
    }

    /// `lim_{t→∞} (t·inf + ln L(t))`, the log of the mass sitting at the
    /// infimum, when finite.
    pub fn ground_limit(&self) -> Option<f64> {
        match self {
            LaplaceCurve::Measure(mu) => {
                let inf = mu.infimum()?;
                Some(mu.mass_at(inf).ln())
            }
            LaplaceCurve::Euclidean { .. } => None,
            LaplaceCurve::Landau { b } => Some((b / (2.0 * PI)).ln()),
        }
    }

    /// `ln L(0)` when finite.
    fn ln_laplace_at_zero(&self) -> Option<f64> {
        match self {
            LaplaceCurve::Measure(mu) => Some(mu.total_mass().ln()),
            _ => None,
        }
    }

    /// `F(λ) = μ_A(]-∞, λ[)`, open on the right.
    pub fn cumulative(&self, lambda: f64) -> Result<f64> {
        Ok(match self {
            LaplaceCurve::Measure(mu) => mu
                .points()
                .into_iter()
                .filter(|&(l, _)| l < lambda)
                .map(|(_, m)| m)
                .sum(),
            LaplaceCurve::Euclidean { n } => {
                if lambda <= 0.0 {
                    0.0
                } else {
                    euclidean_laplacian_cumulative(*n, lambda)?
                }
            }
            LaplaceCurve::Landau { b } => {
                let level = |k: f64| (2.0 * k + 1.0) * b;
                if !(lambda > *b) {
                    return Ok(0.0);
                }
                let mut count = ((lambda / b - 1.0) / 2.0).ceil().max(0.0);
                while count > 0.0 && level(count - 1.0) >= lambda {
                    count -= 1.0;
                }
                while level(count) < lambda {
                    count += 1.0;
                }
                count * b / (2.0 * PI)
            }
        })
    }

    /// Largest excess of `ln L(t_2)` over the chord through its neighbours,
    /// across consecutive triples of `ts` (sorted ascending). Nonpositive up
    /// to rounding for a log-convex curve.
    pub fn log_convexity_excess(&self, ts: &[f64]) -> Result<f64> {
        let values = ts
            .iter()
            .map(|&t| self.ln_laplace(t))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = f64::NEG_INFINITY;
        for i in 1..ts.len().saturating_sub(1) {
            let (t1, t2, t3) = (ts[i - 1], ts[i], ts[i + 1]);
            let s = (t2 - t1) / (t3 - t1);
            let chord = (1.0 - s) * values[i - 1] + s * values[i + 1];
            worst = worst.max(values[i] - chord);
        }
        Ok(worst)
    }
}

pub fn laplace_transform(curve: &LaplaceCurve, t: f64) -> Result<f64> {
    Ok(curve.ln_laplace(t)?.exp())
}

/// Landau heat trace summed level by level, truncated once
/// `e^{-2Bt n_max} < 1e-16`.
pub fn landau_laplace_series(b: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let n_max = (16.0 * std::f64::consts::LN_10 / (2.0 * b * t)).ceil() + 1.0;
    if n_max > u32::MAX as f64 {
        return Err(invalid_param("t", "series truncation too long"));
    }
    let mu = landau_spectral_measure(b, n_max as u32)?;
    laplace_transform(&LaplaceCurve::Measure(mu), t)
}

/// `ν(λ) = μ(λ) e^{-tλ} / L(t)`.
pub fn gibbs_spectral_state(mu: &SpectralMeasure, t: f64) -> Result<SpectralState> {
    check_t(t)?;
    let points = mu.points();
    let log_weights: Vec<f64> = points
        .iter()
        .map(|&(l, m)| {
            if m > 0.0 {
                m.ln() - t * l
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let z = log_sum_exp(log_weights.iter().copied());
    let weights = log_weights.iter().map(|w| (w - z).exp()).collect();
    SpectralState::new(weights, mu)
}

/// `t E(ν) + ln L(t) - S_A(ν)`, nonnegative by Gibbs' inequality.
pub fn gibbs_spectral_bound_deficit(
    nu: &SpectralState,
    mu: &SpectralMeasure,
    t: f64,
) -> Result<f64> {
    let ln_l = LaplaceCurve::Measure(mu.clone()).ln_laplace(t)?;
    Ok(t * nu.energy(mu)? + ln_l - spectral_entropy(nu, mu)?)
}

/// `(ln L)^*(E) = inf_{t >= 0} (tE + ln L(t))`.
///
/// At the spectral infimum the value is the `t → ∞` limit, finite only when
/// an atom sits there. Below it no minimizer exists.
pub fn legendre_of_log_laplace(curve: &LaplaceCurve, energy: f64) -> Result<f64> {
    if !energy.is_finite() {
        return Err(invalid_param("E", format!("{energy} is not finite")));
    }
    let inf = curve.infimum();
    let slack = INFIMUM_SLACK * inf.abs().max(1.0);
    if energy < inf - slack {
        return Err(Error::Unbracketable {
            reason: format!("E = {energy} lies below the spectral infimum {inf}"),
        });
    }
    if energy <= inf + slack {
        return curve.ground_limit().ok_or_else(|| Error::Unbracketable {
            reason: format!("E = {energy} at the spectral infimum {inf}: value tends to -inf"),
        });
    }

    let g = |t: f64| -> Result<f64> { Ok(t * energy + curve.ln_laplace(t)?) };
    let mut t_hi = 1.0;
    while g(2.0 * t_hi)? < g(t_hi)? {
        t_hi *= 2.0;
        if t_hi > LEGENDRE_T_CAP {
            return Err(Error::Unbracketable {
                reason: format!("no minimizer below t = {LEGENDRE_T_CAP:e} for E = {energy}"),
            });
        }
    }

    // Golden section in u = ln t; tE + ln L(t) is convex, hence unimodal in u.
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (LEGENDRE_T_MIN.ln(), (2.0 * t_hi).ln());
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c.exp())?, g(d.exp())?);
    let mut best = gc.min(gd).min(g(a.exp())?).min(g(b.exp())?);
    for _ in 0..LEGENDRE_MAX_ITER {
        if b.exp() - a.exp() < LEGENDRE_T_TOLERANCE || b - a < 1e-13 {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c.exp())?;
            best = best.min(gc);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d.exp())?;
            best = best.min(gd);
        }
    }
    if let Some(at_zero) = curve.ln_laplace_at_zero() {
        best = best.min(at_zero);
    }
    Ok(best)
}

/// Closed-form Legendre transform on the Landau curve at energy
/// `E = (2 nbar + 1) B`: `ln((E + B)/4π) + nbar ln(1 + 1/nbar)`.
pub fn landau_legendre_closed_form(b: f64, nbar: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(invalid_param(
            "B",
            format!("field strength {b} must be positive"),
        ));
    }
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(invalid_param("nbar", format!("{nbar} must be nonnegative")));
    }
    let energy = (2.0 * nbar + 1.0) * b;
    let occupation = if nbar == 0.0 {
        0.0
    } else {
        nbar * (1.0 / nbar).ln_1p()
    };
    Ok(((energy + b) / (4.0 * PI)).ln() + occupation)
}

/// Piecewise-linear interpolant through ascending nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// `None` outside `[x_0, x_last]`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (first, last) = (*self.xs.first()?, *self.xs.last()?);
        if !(x >= first && x <= last) {
            return None;
        }
        let j = self.xs.partition_point(|&v| v < x);
        if j == 0 || self.xs[j] == x {
            return Some(self.ys[j]);
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let s = (x - x0) / (x1 - x0);
        Some((1.0 - s) * self.ys[j - 1] + s * self.ys[j])
    }
}

/// Least concave majorant of the sample points (upper hull, monotone chain).
pub fn concave_hull(points: &[(f64, f64)]) -> Result<PiecewiseLinear> {
    if points.is_empty() {
        return Err(invalid_param("points", "empty"));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(invalid_param("points", "non-finite sample"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    sorted.dedup_by(|next, kept| next.0 == kept.0);

    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for p in sorted {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(PiecewiseLinear {
        xs: hull.iter().map(|p| p.0).collect(),
        ys: hull.iter().map(|p| p.1).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonPoint {
    pub lambda: f64,
    /// `(ln L)^*(λ)`.
    pub legendre: f64,
    /// `(ln F)^c(λ)`.
    pub hull: f64,
}

/// Evaluates both sides of `(ln L)^* >= (ln F)^c` on the grid points where
/// `F > 0`; the hull is taken over those same points.
pub fn bound_comparison_points(curve: &LaplaceCurve, grid: &[f64]) -> Result<Vec<ComparisonPoint>> {
    if grid.is_empty() {
        return Err(invalid_param("grid", "empty"));
    }
    let mut samples = Vec::new();
    for &lambda in grid {
        let f = curve.cumulative(lambda)?;
        if f > 0.0 {
            samples.push((lambda, f.ln()));
        }
    }
    if samples.is_empty() {
        return Err(invalid_param("grid", "F vanishes on every grid point"));
    }
    let hull = concave_hull(&samples)?;
    samples
        .iter()
        .map(|&(lambda, _)| {
            Ok(ComparisonPoint {
                lambda,
                legendre: legendre_of_log_laplace(curve, lambda)?,
                hull: hull.eval(lambda).expect("grid point inside hull range"),
            })
        })
        .collect()
}

/// `min over the grid of (ln L)^*(λ) - (ln F)^c(λ)`.
pub fn bound_comparison(curve: &LaplaceCurve, grid: &[f64]) -> Result<f64> {
    Ok(bound_comparison_points(curve, grid)?
        .iter()
        .map(|p| p.legendre - p.hull)
        .fold(f64::INFINITY, f64::min))
}
