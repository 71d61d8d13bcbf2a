//! Batch scenarios and the reports they produce.
//!
//! Every instance draws from its own RNG seeded by `mix_seed(master, index)`,
//! so records are reproducible one by one and independent of scheduling.
//! Records are always emitted in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{invalid_param, Error, Result};
use crate::function_space::{
    circle_scenario, hermite_default_cutoff, hermite_scenario, CircleState, DEFAULT_GRID_POINTS,
};
use crate::logsobolev::{
    bound_comparison_points, gibbs_spectral_bound_deficit, gibbs_spectral_state,
    landau_legendre_closed_form, legendre_of_log_laplace, LaplaceCurve,
};
use crate::operator::{
    gibbs_deficit, golden_thompson_deficit, shannon_entropy, tensor_density, von_neumann_entropy,
    DensityMatrix,
};
use crate::povm::{
    liouville_matrix, measurement_distribution, mub_pair, povm_compress, povm_from_basis,
    povm_tensor_pair, product_majorant, span_projector, Basis, FinitePovm, Partition,
    WeightedMeasure,
};
use crate::random::{
    mix_seed, random_density, random_hermitian, random_probabilities, random_unitary,
};
use crate::spectral::{spectral_entropy, sphere_spectral_measure, SpectralState};
use crate::uncertainty::{
    choi_jensen_deficit, constant_k, constant_k_prime, refinement_gap, relative_entropy_term,
    theorem1_deficit, trace_product_bound,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Bases,
    Mub,
    TensorEquality,
    Lemmas,
    Refinement,
    Sphere,
    Landau,
    Euclidean,
    LogsobCompare,
    Hermite,
    Circle,
    FuzzTheorem1,
}

impl Scenario {
    pub const ALL: [Scenario; 12] = [
        Scenario::Bases,
        Scenario::Mub,
        Scenario::TensorEquality,
        Scenario::Lemmas,
        Scenario::Refinement,
        Scenario::Sphere,
        Scenario::Landau,
        Scenario::Euclidean,
        Scenario::LogsobCompare,
        Scenario::Hermite,
        Scenario::Circle,
        Scenario::FuzzTheorem1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Bases => "bases",
            Scenario::Mub => "mub",
            Scenario::TensorEquality => "tensor-equality",
            Scenario::Lemmas => "lemmas",
            Scenario::Refinement => "refinement",
            Scenario::Sphere => "sphere",
            Scenario::Landau => "landau",
            Scenario::Euclidean => "euclidean",
            Scenario::LogsobCompare => "logsob-compare",
            Scenario::Hermite => "hermite",
            Scenario::Circle => "circle",
            Scenario::FuzzTheorem1 => "fuzz-theorem1",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Hilbert-space dimension, ambient dimension, or mode cutoff depending
    /// on the scenario.
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Pass threshold only: a record passes iff `deficit >= -tolerance`.
    pub tolerance: f64,
    pub b: f64,
    pub t: f64,
    /// `a:b` (unit steps), `a:b:n` (n linear points) or `log:a:b:n`.
    pub nbar_grid: String,
    /// Quadrature nodes for the function-space scenarios.
    pub grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 4,
            trials: 100,
            seed: 42,
            tolerance: 1e-8,
            b: 1.0,
            t: 1.0,
            nbar_grid: "0:10".into(),
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid_param("dim", "must be positive"));
        }
        if self.trials == 0 {
            return Err(invalid_param("trials", "must be positive"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid_param(
                "tolerance",
                format!("{} must be nonnegative", self.tolerance),
            ));
        }
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(invalid_param("B", format!("{} must be positive", self.b)));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(invalid_param("t", format!("{} must be positive", self.t)));
        }
        parse_grid(&self.nbar_grid)?;
        Ok(())
    }
}

/// Parses `a:b`, `a:b:n` or `log:a:b:n` into grid values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| invalid_param("nbar-grid", format!("{text:?}: {why}"));
    let (log, body) = match text.strip_prefix("log:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let parts: Vec<&str> = body.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values: Vec<f64> = match (log, parts.as_slice()) {
        (false, [a, b]) => {
            let (a, b) = (num(a)?, num(b)?);
            if !(a <= b) || b - a > 1e7 {
                return Err(bad("need a <= b"));
            }
            let steps = (b - a).floor() as usize;
            (0..=steps).map(|i| a + i as f64).collect()
        }
        (_, [a, b, n]) => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| bad("count is not an integer"))?;
            if n == 0 || !(a <= b) {
                return Err(bad("need a <= b and a positive count"));
            }
            if log && !(a > 0.0) {
                return Err(bad("log grid needs a > 0"));
            }
            (0..n)
                .map(|i| {
                    let s = if n == 1 {
                        0.0
                    } else {
                        i as f64 / (n - 1) as f64
                    };
                    if log {
                        a * (b / a).powf(s)
                    } else {
                        a + (b - a) * s
                    }
                })
                .collect()
        }
        _ => return Err(bad("expected a:b, a:b:n or log:a:b:n")),
    };
    if values.iter().any(|v: &f64| !(*v >= 0.0) || !v.is_finite()) {
        return Err(bad("values must be finite and nonnegative"));
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub index: usize,
    pub seed: u64,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` for inequalities, `-|lhs - rhs|` for identities.
    pub deficit: f64,
    pub pass: bool,
    pub extras: BTreeMap<String, f64>,
}

impl Record {
    fn inequality(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Record {
            index: 0,
            seed: 0,
            label: label.into(),
            lhs,
            rhs,
            deficit: lhs - rhs,
            pass: false,
            extras: BTreeMap::new(),
        }
    }

    fn identity(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Record {
            // Subtracting from 0.0 keeps an exact match at +0, not -0.
            deficit: 0.0 - (lhs - rhs).abs(),
            ..Record::inequality(label, lhs, rhs)
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    fn extra(&self, key: &str) -> Option<f64> {
        self.extras.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub min_deficit: f64,
    /// `max(0, -deficit)` over all records.
    pub max_violation: f64,
}

impl Aggregate {
    fn from_records(records: &[Record]) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let min_deficit = records
            .iter()
            .map(|r| r.deficit)
            .fold(f64::INFINITY, f64::min);
        let max_violation = records
            .iter()
            .map(|r| (-r.deficit).max(0.0))
            .fold(0.0, f64::max);
        Aggregate {
            count: records.len(),
            passed,
            failed: records.len() - passed,
            min_deficit,
            max_violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: Scenario,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub aggregate: Aggregate,
    pub timing_ms: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: usize,
    seed: u64,
    label: &'a str,
    lhs: f64,
    rhs: f64,
    deficit: f64,
    pass: bool,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.aggregate.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// One row per record: `index,seed,label,lhs,rhs,deficit,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(CsvRow {
                index: r.index,
                seed: r.seed,
                label: &r.label,
                lhs: r.lhs,
                rhs: r.rhs,
                deficit: r.deficit,
                pass: r.pass,
            })
            .map_err(|e| Error::Serialization(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Looks up an extra value across records, in index order.
    pub fn extras(&self, key: &str) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.extra(key)).collect()
    }
}

/// Runs `count` seeded instances concurrently; output is in index order.
fn seeded<F>(count: usize, master: u64, f: F) -> Result<Vec<Record>>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Record> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|index| {
            let seed = mix_seed(master, index as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut record = f(index, &mut rng)?;
            record.index = index;
            record.seed = seed;
            Ok(record)
        })
        .collect()
}

fn haar_basis<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Basis> {
    Basis::new(random_unitary(dim, rng))
}

fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    let rank = rng.random_range(1..=dim);
    random_density(dim, rank, rng)
}

fn require_dim(config: &RunConfig, min: usize) -> Result<()> {
    if config.dim < min {
        return Err(invalid_param(
            "dim",
            format!("{} is below the minimum {min}", config.dim),
        ));
    }
    Ok(())
}

/// Uncertainty record for a basis pair with the default product majorant.
fn basis_pair_record(e: &Basis, f: &Basis, rho: &DensityMatrix, label: String) -> Result<Record> {
    let (p, q) = (povm_from_basis(e), povm_from_basis(f));
    let (mu_p, mu_q) = product_majorant(&liouville_matrix(&p, &q)?, false);
    let r = theorem1_deficit(rho, &p, &q, &mu_p, &mu_q)?;
    let k = constant_k(
        &measurement_distribution(rho, &p)?,
        &measurement_distribution(rho, &q)?,
        &mu_p,
        &mu_q,
    )?;
    Ok(Record::inequality(label, r.lhs, r.entropy)
        .with("K", k)
        .with("K_prime", constant_k_prime(e, f)?)
        .with(
            "trace_product",
            trace_product_bound(rho, &p, &q, &mu_p, &mu_q)?,
        )
        .with("shannon_sum", {
            let np = measurement_distribution(rho, &p)?;
            let nq = measurement_distribution(rho, &q)?;
            shannon_entropy(np.masses()) + shannon_entropy(nq.masses())
        }))
}

fn run_bases(c: &RunConfig) -> Result<Vec<Record>> {
    require_dim(c, 2)?;
    let d = c.dim;
    seeded(c.trials, c.seed, |_, rng| {
        let (e, f) = (haar_basis(d, rng)?, haar_basis(d, rng)?);
        let rho = random_state(d, rng)?;
        basis_pair_record(&e, &f, &rho, format!("haar pair d={d}"))
    })
}

fn run_fuzz(c: &RunConfig) -> Result<Vec<Record>> {
    seeded(c.trials, c.seed, |_, rng| {
        let d = rng.random_range(2..=8usize);
        let (e, f) = (haar_basis(d, rng)?, haar_basis(d, rng)?);
        let rank = rng.random_range(1..=d);
        let rho = random_density(d, rank, rng)?;
        basis_pair_record(&e, &f, &rho, format!("d={d} rank={rank}"))
    })
}

fn run_mub(c: &RunConfig) -> Result<Vec<Record>> {
    require_dim(c, 2)?;
    let d = c.dim;
    let (e, f) = mub_pair(d);
    seeded(c.trials, c.seed, |_, rng| {
        let rho = random_state(d, rng)?;
        Ok(
            basis_pair_record(&e, &f, &rho, format!("standard/dft d={d}"))?
                .with("ln_d", (d as f64).ln()),
        )
    })
}

fn run_tensor_equality(c: &RunConfig) -> Result<Vec<Record>> {
    seeded(c.trials, c.seed, |index, rng| {
        let (a, b) = [(2, 2), (2, 3), (3, 2), (3, 3)][index % 4];
        let (e, f) = (haar_basis(a, rng)?, haar_basis(b, rng)?);
        let rho = tensor_density(
            &DensityMatrix::from_spectrum(e.matrix(), &random_probabilities(a, rng))?,
            &DensityMatrix::from_spectrum(f.matrix(), &random_probabilities(b, rng))?,
        );
        let (p, q) = povm_tensor_pair(&e, &f);
        let ones_p = WeightedMeasure::new(p.labels().to_vec(), vec![1.0; a])?;
        let ones_q = WeightedMeasure::new(q.labels().to_vec(), vec![1.0; b])?;
        let r = theorem1_deficit(&rho, &p, &q, &ones_p, &ones_q)?;
        Ok(Record::identity(
            format!("C^{a} x C^{b} product state"),
            r.lhs,
            r.entropy,
        ))
    })
}

/// Compression of a Haar basis POVM on `C^{d+1}` to a random `d`-plane.
fn compressed_povm<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<FinitePovm> {
    let big = povm_from_basis(&haar_basis(d + 1, rng)?);
    let columns: Vec<usize> = (0..d).collect();
    povm_compress(&big, &span_projector(&haar_basis(d + 1, rng)?, &columns))
}

fn run_lemmas(c: &RunConfig) -> Result<Vec<Record>> {
    let d = c.dim;
    seeded(c.trials, c.seed, |_, rng| {
        let a = random_hermitian(d, 1.0, rng);
        let b = random_hermitian(d, 1.0, rng);
        let rho = random_state(d, rng)?;
        let gibbs = gibbs_deficit(&a, &rho)?;
        let gt = golden_thompson_deficit(&a, &b)?;
        let povm = compressed_povm(d, rng)?;
        let weights: Vec<f64> = (0..povm.len())
            .map(|_| 10f64.powf(rng.random_range(-1.0..1.0)))
            .collect();
        let jensen = choi_jensen_deficit(&povm, &weights)?;
        // -ln ||ρ|| <= S(ρ)
        let norm_gap = von_neumann_entropy(&rho) + rho.largest_eigenvalue().ln();
        let worst = gibbs.min(gt).min(jensen).min(norm_gap);
        Ok(Record::inequality(format!("d={d}"), worst, 0.0)
            .with("gibbs", gibbs)
            .with("golden_thompson", gt)
            .with("choi_jensen", jensen)
            .with("norm_entropy", norm_gap))
    })
}

fn run_refinement(c: &RunConfig) -> Result<Vec<Record>> {
    require_dim(c, 2)?;
    let d = c.dim;
    seeded(c.trials, c.seed, |_, rng| {
        let povm = povm_from_basis(&haar_basis(d, rng)?);
        let rho = random_state(d, rng)?;
        let masses: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..2.0)).collect();
        let mu = WeightedMeasure::new(povm.labels().to_vec(), masses)?;
        let blocks = rng.random_range(1..=d);
        let keys: Vec<usize> = (0..d).map(|_| rng.random_range(0..blocks)).collect();
        let partition = Partition::from_map(&keys);
        let coarse_mu = partition.pushforward(&mu)?;
        let fine = relative_entropy_term(&measurement_distribution(&rho, &povm)?, &mu)?;
        let gap = refinement_gap(&rho, &povm, &partition, &mu, &coarse_mu)?;
        Ok(Record::inequality(
            format!("d={d} groups={}", partition.groups().len()),
            fine + gap,
            fine,
        ))
    })
}

fn run_sphere(c: &RunConfig) -> Result<Vec<Record>> {
    require_dim(c, 2)?;
    let n = c.dim as u32;
    let t = c.t;
    let mu = sphere_spectral_measure(n, 60)?;
    let curve = LaplaceCurve::Measure(mu.clone());
    let ln_l = curve.ln_laplace(t)?;
    let mut records = seeded(c.trials, c.seed, |_, rng| {
        let levels = rng.random_range(1..=8usize);
        let mut w = random_probabilities(levels, rng);
        w.resize(mu.len(), 0.0);
        let nu = SpectralState::new(w, &mu)?;
        let energy = nu.energy(&mu)?;
        let s_a = spectral_entropy(&nu, &mu)?;
        let deficit = gibbs_spectral_bound_deficit(&nu, &mu, t)?;
        Ok(Record::inequality(
            format!("S^{} random spectral state", n - 1),
            t * energy + ln_l,
            s_a,
        )
        .with("deficit", deficit))
    })?;
    let gibbs = gibbs_spectral_state(&mu, t)?;
    let index = records.len();
    let mut r = Record::identity(
        format!("S^{} Gibbs state t={t}", n - 1),
        t * gibbs.energy(&mu)? + ln_l,
        spectral_entropy(&gibbs, &mu)?,
    );
    r.index = index;
    r.seed = mix_seed(c.seed, index as u64);
    records.push(r);
    Ok(records)
}

fn run_landau(c: &RunConfig) -> Result<Vec<Record>> {
    let curve = LaplaceCurve::landau(c.b)?;
    let grid = parse_grid(&c.nbar_grid)?;
    let b = c.b;
    seeded(grid.len(), c.seed, |index, _| {
        let nbar = grid[index];
        let energy = (2.0 * nbar + 1.0) * b;
        let closed = landau_legendre_closed_form(b, nbar)?;
        let numeric = legendre_of_log_laplace(&curve, energy)?;
        Ok(
            Record::identity(format!("B={b} nbar={nbar}"), closed, numeric)
                .with("nbar", nbar)
                .with("energy", energy),
        )
    })
}

fn run_euclidean(c: &RunConfig) -> Result<Vec<Record>> {
    let n = c.dim as u32;
    let curve = LaplaceCurve::euclidean(n)?;
    let count = c.trials;
    seeded(count, c.seed, |index, _| {
        let s = if count == 1 {
            0.0
        } else {
            index as f64 / (count - 1) as f64
        };
        let energy = 1e-2 * 1e5f64.powf(s);
        let closed = 0.5 * n as f64 * (1f64.exp() * energy / (2.0 * PI * n as f64)).ln();
        let numeric = legendre_of_log_laplace(&curve, energy)?;
        Ok(
            Record::identity(format!("n={n} E={energy:.6e}"), closed, numeric)
                .with("energy", energy),
        )
    })
}

fn run_logsob_compare(c: &RunConfig) -> Result<Vec<Record>> {
    let n = c.dim as u32;
    let euclid = LaplaceCurve::euclidean(n)?;
    let euclid_grid: Vec<f64> = (0..100)
        .map(|i| 0.1 * 1000f64.powf(i as f64 / 99.0))
        .collect();
    let landau = LaplaceCurve::landau(c.b)?;
    let landau_grid: Vec<f64> = (0..=500)
        .map(|i| c.b * (1.0 + 100.0 * i as f64 / 500.0))
        .collect();
    let mut records = Vec::new();
    for (name, curve, grid) in [
        ("euclidean", &euclid, &euclid_grid),
        ("landau", &landau, &landau_grid),
    ] {
        for p in bound_comparison_points(curve, grid)? {
            let index = records.len();
            let mut r = Record::inequality(
                format!("{name} lambda={:.6e}", p.lambda),
                p.legendre,
                p.hull,
            )
            .with("lambda", p.lambda);
            r.index = index;
            r.seed = mix_seed(c.seed, index as u64);
            records.push(r);
        }
    }
    Ok(records)
}

fn run_hermite(c: &RunConfig) -> Result<Vec<Record>> {
    let ts: Vec<f64> = (0..4).map(|i| c.t / 2f64.powi(i)).collect();
    let points = c.grid_points | 1;
    let results = ts
        .par_iter()
        .map(|&t| hermite_scenario(t, hermite_default_cutoff(t)?, points))
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    for h in results {
        let fourier = Record::inequality(
            format!("fourier t={}", h.t),
            2.0 * h.spatial_entropy,
            h.entropy,
        );
        let lsi = 0.5 * (1f64.exp() * h.energy / (2.0 * PI)).ln();
        let lsi_record = Record::inequality(
            format!("log-sobolev t={}", h.t),
            h.spatial_entropy + lsi,
            h.entropy,
        );
        for r in [fourier, lsi_record] {
            let index = records.len();
            let mut r = r
                .with("t", h.t)
                .with("k_max", h.k_max as f64)
                .with("energy", h.energy)
                .with("spatial_entropy", h.spatial_entropy);
            r.index = index;
            r.seed = mix_seed(c.seed, index as u64);
            records.push(r);
        }
    }
    Ok(records)
}

fn run_circle(c: &RunConfig) -> Result<Vec<Record>> {
    let cutoff = c.dim;
    let t = c.t;
    let points = c.grid_points.max(8 * cutoff + 1);
    let make = |label: String, state: &CircleState| -> Result<Record> {
        let r = circle_scenario(state, points, t)?;
        Ok(
            Record::inequality(label, r.spatial_entropy + r.spectral_entropy, r.entropy)
                .with("spatial_entropy", r.spatial_entropy)
                .with("spectral_entropy", r.spectral_entropy)
                .with("refined_entropy", r.refined_entropy)
                .with("parametric_deficit", r.parametric_deficit),
        )
    };
    seeded(c.trials, c.seed, |index, rng| {
        if index == 0 {
            // Level weights of e^{-tΔ}, restricted to |k| <= K.
            let mu = sphere_spectral_measure(2, cutoff as u32)?;
            let w = gibbs_spectral_state(&mu, t)?;
            make(
                format!("spectral K={cutoff}"),
                &CircleState::spectral(w.weights())?,
            )
        } else {
            make(
                format!("random K={cutoff}"),
                &CircleState::random(cutoff, rng)?,
            )
        }
    })
}

/// Runs a scenario and assembles its report.
pub fn run(scenario: Scenario, config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let mut records = match scenario {
        Scenario::Bases => run_bases(config),
        Scenario::Mub => run_mub(config),
        Scenario::TensorEquality => run_tensor_equality(config),
        Scenario::Lemmas => run_lemmas(config),
        Scenario::Refinement => run_refinement(config),
        Scenario::Sphere => run_sphere(config),
        Scenario::Landau => run_landau(config),
        Scenario::Euclidean => run_euclidean(config),
        Scenario::LogsobCompare => run_logsob_compare(config),
        Scenario::Hermite => run_hermite(config),
        Scenario::Circle => run_circle(config),
        Scenario::FuzzTheorem1 => run_fuzz(config),
    }?;
    for r in records.iter_mut() {
        r.pass = r.deficit >= -config.tolerance;
    }
    let aggregate = Aggregate::from_records(&records);
    Ok(Report {
        scenario,
        config: config.clone(),
        records,
        aggregate,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
