//! Finite POVMs, their constructions from orthonormal bases, measurement
//! distributions, Liouville matrices and factorized majorants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{check_dims, max_abs, CMatrix, DensityMatrix, HermitianOperator};

pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;
pub const PROJECTOR_TOLERANCE: f64 = 1e-10;
pub const POVM_PSD_TOLERANCE: f64 = 1e-10;
pub const POVM_SUM_TOLERANCE: f64 = 1e-9;
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;
/// Slack allowed in `μ_P(i) μ_Q(j) >= L(i, j)`.
pub const MAJORANT_TOLERANCE: f64 = 1e-12;
/// Liouville rows/columns whose largest entry is at most this are treated as
/// zero: the corresponding POVM element carries no mass.
pub const ZERO_ROW_TOLERANCE: f64 = 1e-14;

/// Orthonormal basis stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    columns: CMatrix,
}

impl Basis {
    pub fn new(columns: CMatrix) -> Result<Self> {
        if columns.nrows() != columns.ncols() {
            return Err(Error::NotSquare {
                rows: columns.nrows(),
                cols: columns.ncols(),
            });
        }
        if columns.nrows() == 0 {
            return Err(Error::Empty);
        }
        let n = columns.nrows();
        let dev = max_abs(&(columns.adjoint() * &columns - CMatrix::identity(n, n)));
        if !(dev <= ORTHONORMAL_TOLERANCE) {
            return Err(Error::NotOrthonormal { max_deviation: dev });
        }
        Ok(Basis { columns })
    }

    pub fn from_vectors(vectors: &[DVector<Complex64>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Empty);
        }
        Self::new(DMatrix::from_columns(vectors))
    }

    pub fn standard(dim: usize) -> Self {
        Basis {
            columns: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.columns
    }

    pub fn vector(&self, i: usize) -> DVector<Complex64> {
        self.columns.column(i).into_owned()
    }

    /// `|<e_i, f_j>|` for every pair.
    pub fn overlaps(&self, other: &Basis) -> Result<DMatrix<f64>> {
        check_dims(self.dim(), other.dim())?;
        let g = self.columns.adjoint() * &other.columns;
        Ok(g.map(|z| z.norm()))
    }
}

/// Discrete Fourier basis, `f_j(k) = d^{-1/2} exp(-2πi jk/d)`.
pub fn dft_basis(dim: usize) -> Basis {
    let norm = (dim as f64).sqrt().recip();
    let columns = CMatrix::from_fn(dim, dim, |k, j| {
        let angle = -2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
        Complex64::from_polar(norm, angle)
    });
    Basis { columns }
}

/// Standard basis and DFT basis, mutually unbiased in every dimension.
pub fn mub_pair(dim: usize) -> (Basis, Basis) {
    (Basis::standard(dim), dft_basis(dim))
}

/// Positive operators summing to the identity, with one label per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePovm {
    elements: Vec<HermitianOperator>,
    labels: Vec<String>,
}

impl FinitePovm {
    pub fn new(elements: Vec<HermitianOperator>, labels: Vec<String>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidPovm {
            reason: "no elements".into(),
        })?;
        if labels.len() != elements.len() {
            return Err(Error::InvalidPovm {
                reason: format!("{} labels for {} elements", labels.len(), elements.len()),
            });
        }
        let dim = first.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for (label, e) in labels.iter().zip(&elements) {
            check_dims(dim, e.dim())?;
            let min = e.min_eigenvalue();
            if min < -POVM_PSD_TOLERANCE {
                return Err(Error::InvalidPovm {
                    reason: format!("element {label:?} has eigenvalue {min:e}"),
                });
            }
            sum += e.matrix();
        }
        let dev = max_abs(&(sum - CMatrix::identity(dim, dim)));
        if !(dev <= POVM_SUM_TOLERANCE) {
            return Err(Error::InvalidPovm {
                reason: format!("elements sum to identity only within {dev:e}"),
            });
        }
        Ok(FinitePovm { elements, labels })
    }

    /// Labels `"0"`, `"1"`, ...
    pub fn with_index_labels(elements: Vec<HermitianOperator>) -> Result<Self> {
        let labels = (0..elements.len()).map(|i| i.to_string()).collect();
        Self::new(elements, labels)
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `U P_i U*` for every element.
    pub fn conjugate(&self, u: &CMatrix) -> FinitePovm {
        FinitePovm {
            elements: self.elements.iter().map(|e| e.conjugate(u)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Whether every element is idempotent within `tol`.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.elements.iter().all(|e| {
            let m = e.matrix();
            max_abs(&(m * m - m)) < tol
        })
    }
}

/// Rank-one projectors onto the basis vectors.
pub fn povm_from_basis(basis: &Basis) -> FinitePovm {
    let elements = (0..basis.dim())
        .map(|i| HermitianOperator::projector(&basis.vector(i)))
        .collect();
    FinitePovm::with_index_labels(elements).expect("projectors of an orthonormal basis form a POVM")
}

/// Orthonormal basis of the range of a projector, as columns.
pub fn projector_range(proj: &HermitianOperator) -> Result<CMatrix> {
    let m = proj.matrix();
    let dev = max_abs(&(m * m - m));
    if !(dev <= PROJECTOR_TOLERANCE) {
        return Err(Error::NotProjector { max_deviation: dev });
    }
    let eig = proj.eig();
    let cols: Vec<usize> = (0..eig.dim())
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .collect();
    if cols.is_empty() {
        return Err(Error::NotProjector { max_deviation: 0.0 });
    }
    Ok(eig.eigenvectors.select_columns(&cols))
}

/// Compression `Π_H P_i Π_H`, expressed in an orthonormal basis of the range
/// of `proj`. The result acts on the `rank(proj)`-dimensional subspace.
pub fn povm_compress(povm: &FinitePovm, proj: &HermitianOperator) -> Result<FinitePovm> {
    check_dims(povm.dim(), proj.dim())?;
    let w = projector_range(proj)?;
    let elements = povm.elements.iter().map(|e| e.compress(&w)).collect();
    FinitePovm::new(elements, povm.labels.clone())
}

/// `P(i) = Π_{e_i} ⊗ 1` and `Q(j) = 1 ⊗ Π_{f_j}` on `C^a ⊗ C^b`.
pub fn povm_tensor_pair(first: &Basis, second: &Basis) -> (FinitePovm, FinitePovm) {
    let id_a = HermitianOperator::identity(first.dim());
    let id_b = HermitianOperator::identity(second.dim());
    let p = povm_from_basis(first)
        .elements
        .iter()
        .map(|e| crate::operator::tensor(e, &id_b))
        .collect();
    let q = povm_from_basis(second)
        .elements
        .iter()
        .map(|f| crate::operator::tensor(&id_a, f))
        .collect();
    (
        FinitePovm::with_index_labels(p).expect("tensor of POVM with identity"),
        FinitePovm::with_index_labels(q).expect("tensor of identity with POVM"),
    )
}

/// A partition of `0..n` into nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    len: usize,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>, len: usize) -> Result<Self> {
        let mut seen = vec![false; len];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidPartition {
                    reason: "empty group".into(),
                });
            }
            for &i in g {
                if i >= len {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} out of range 0..{len}"),
                    });
                }
                if seen[i] {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} appears twice"),
                    });
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition {
                reason: format!("index {missing} is missing"),
            });
        }
        Ok(Partition { groups, len })
    }

    pub fn singletons(len: usize) -> Self {
        Partition {
            groups: (0..len).map(|i| vec![i]).collect(),
            len,
        }
    }

    pub fn whole(len: usize) -> Self {
        Partition {
            groups: vec![(0..len).collect()],
            len,
        }
    }

    /// `{0,1}, {2,3}, ...` with a trailing singleton when `len` is odd.
    pub fn pairs(len: usize) -> Self {
        Partition {
            groups: (0..len)
                .collect::<Vec<_>>()
                .chunks(2)
                .map(|c| c.to_vec())
                .collect(),
            len,
        }
    }

    /// Partition induced by a labelling map `i -> key(i)`, groups ordered by
    /// first occurrence.
    pub fn from_map(keys: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &k) in keys.iter().enumerate() {
            match order.iter().position(|&o| o == k) {
                Some(g) => groups[g].push(i),
                None => {
                    order.push(k);
                    groups.push(vec![i]);
                }
            }
        }
        Partition {
            groups,
            len: keys.len(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len != n {
            return Err(Error::InvalidPartition {
                reason: format!("partition of {} indices applied to {n}", self.len),
            });
        }
        Ok(())
    }

    fn group_label(&self, g: usize, labels: &[String]) -> String {
        let members = &self.groups[g];
        if members.len() == 1 {
            labels[members[0]].clone()
        } else {
            members
                .iter()
                .map(|&i| labels[i].as_str())
                .collect::<Vec<_>>()
                .join("+")
        }
    }

    /// Pushforward of a measure under the group map.
    pub fn pushforward(&self, measure: &WeightedMeasure) -> Result<WeightedMeasure> {
        self.check_len(measure.len())?;
        let labels = (0..self.groups.len())
            .map(|g| self.group_label(g, &measure.labels))
            .collect();
        let masses = self
            .groups
            .iter()
            .map(|g| g.iter().map(|&i| measure.masses[i]).sum())
            .collect();
        WeightedMeasure::new(labels, masses)
    }
}

/// Element per group equal to the sum of its members.
pub fn povm_coarsen(povm: &FinitePovm, partition: &Partition) -> Result<FinitePovm> {
    partition.check_len(povm.len())?;
    let dim = povm.dim();
    let mut elements = Vec::with_capacity(partition.groups.len());
    let mut labels = Vec::with_capacity(partition.groups.len());
    for (g, members) in partition.groups.iter().enumerate() {
        let mut m = CMatrix::zeros(dim, dim);
        for &i in members {
            m += povm.elements[i].matrix();
        }
        elements.push(HermitianOperator::hermitize(m));
        labels.push(partition.group_label(g, &povm.labels));
    }
    FinitePovm::new(elements, labels)
}

/// Nonnegative masses on labelled atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedMeasure {
    labels: Vec<String>,
    masses: Vec<f64>,
}

impl WeightedMeasure {
    pub fn new(labels: Vec<String>, masses: Vec<f64>) -> Result<Self> {
        if labels.len() != masses.len() {
            return Err(Error::InvalidMeasure {
                reason: format!("{} labels for {} masses", labels.len(), masses.len()),
            });
        }
        if let Some(i) = masses.iter().position(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidMeasure {
                reason: format!(
                    "mass {} at {:?} is not a finite nonnegative number",
                    masses[i], labels[i]
                ),
            });
        }
        Ok(WeightedMeasure { labels, masses })
    }

    /// Same as [`WeightedMeasure::new`] but also requires total mass 1.
    pub fn probability(labels: Vec<String>, masses: Vec<f64>) -> Result<Self> {
        let m = Self::new(labels, masses)?;
        let total = m.total();
        if !((total - 1.0).abs() <= PROBABILITY_TOLERANCE) {
            return Err(Error::InvalidMeasure {
                reason: format!("total mass {total} is not 1"),
            });
        }
        Ok(m)
    }

    pub fn with_index_labels(masses: Vec<f64>) -> Result<Self> {
        Self::new((0..masses.len()).map(|i| i.to_string()).collect(), masses)
    }

    pub fn uniform(n: usize, mass: f64) -> Self {
        Self::with_index_labels(vec![mass; n]).expect("uniform nonnegative masses")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.labels.clone(),
            self.masses.iter().map(|m| m * factor).collect(),
        )
    }
}

/// `ν(i) = tr(ρ P_i)`, with tiny negative rounding clamped to zero.
pub fn measurement_distribution(rho: &DensityMatrix, povm: &FinitePovm) -> Result<WeightedMeasure> {
    check_dims(rho.dim(), povm.dim())?;
    let masses = povm
        .elements
        .iter()
        .map(|e| rho.operator().trace_with(e).map(|v| v.max(0.0)))
        .collect::<Result<Vec<_>>>()?;
    WeightedMeasure::probability(povm.labels.clone(), masses)
}

/// `L(i, j) = tr(P_i Q_j)`, the state-independent pairing of two POVMs.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleMatrix {
    entries: DMatrix<f64>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl LiouvilleMatrix {
    /// Builds from raw entries; rejects entries below `-1e-10`.
    pub fn new(
        entries: DMatrix<f64>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if row_labels.len() != entries.nrows() || col_labels.len() != entries.ncols() {
            return Err(Error::InvalidMeasure {
                reason: "label count does not match Liouville shape".into(),
            });
        }
        if let Some(v) = entries.iter().find(|v| !(**v >= -1e-10)) {
            return Err(Error::InvalidMeasure {
                reason: format!("Liouville entry {v} is negative"),
            });
        }
        Ok(LiouvilleMatrix {
            entries: entries.map(|v| v.max(0.0)),
            row_labels,
            col_labels,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidMeasure {
                reason: "Liouville rows must be nonempty and rectangular".into(),
            });
        }
        let entries = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
        Self::new(
            entries,
            (0..nrows).map(|i| i.to_string()).collect(),
            (0..ncols).map(|j| j.to_string()).collect(),
        )
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn total(&self) -> f64 {
        self.entries.sum()
    }

    /// Worst `(i, j, L(i,j) - μ_P(i) μ_Q(j))` over all entries.
    pub fn worst_majorant_excess(
        &self,
        mu_p: &WeightedMeasure,
        mu_q: &WeightedMeasure,
    ) -> Result<(usize, usize, f64)> {
        if mu_p.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                left: mu_p.len(),
                right: self.nrows(),
            });
        }
        if mu_q.len() != self.ncols() {
            return Err(Error::DimensionMismatch {
                left: mu_q.len(),
                right: self.ncols(),
            });
        }
        let mut worst = (0, 0, f64::NEG_INFINITY);
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let excess = self.entries[(i, j)] - mu_p.masses[i] * mu_q.masses[j];
                if excess > worst.2 {
                    worst = (i, j, excess);
                }
            }
        }
        Ok(worst)
    }

    /// Errors unless `μ_P ⊗ μ_Q >= L - MAJORANT_TOLERANCE` entrywise.
    pub fn check_majorant(&self, mu_p: &WeightedMeasure, mu_q: &WeightedMeasure) -> Result<()> {
        let (row, col, excess) = self.worst_majorant_excess(mu_p, mu_q)?;
        if excess > MAJORANT_TOLERANCE {
            return Err(Error::MajorantViolation { row, col, excess });
        }
        Ok(())
    }
}

pub fn liouville_matrix(p: &FinitePovm, q: &FinitePovm) -> Result<LiouvilleMatrix> {
    check_dims(p.dim(), q.dim())?;
    let entries = DMatrix::from_fn(p.len(), q.len(), |i, j| {
        crate::operator::trace_product(p.elements[i].matrix(), q.elements[j].matrix()).re
    });
    LiouvilleMatrix::new(entries, p.labels.clone(), q.labels.clone())
}

/// `K` for uniform weights over the nonzero majorant masses.
fn uniform_constant(mu_p: &[f64], mu_q: &[f64]) -> f64 {
    let mean_neg_ln = |m: &[f64]| {
        let pos: Vec<f64> = m.iter().copied().filter(|&v| v > 0.0).collect();
        if pos.is_empty() {
            0.0
        } else {
            -pos.iter().map(|v| v.ln()).sum::<f64>() / pos.len() as f64
        }
    };
    mean_neg_ln(mu_p) + mean_neg_ln(mu_q)
}

const MAX_REFINEMENT_ROUNDS: usize = 1000;

/// A factorized majorant `μ_P ⊗ μ_Q >= L`.
///
/// The default is `μ_P(i) = max_j sqrt(L(i,j))`, `μ_Q(j) = max_i sqrt(L(i,j))`,
/// which on basis pairs is `sup_j |<e_i, f_j>|`. With `refine`, alternately
/// shrinks each side to the smallest value compatible with the other until
/// the uniform-weight constant stops improving by more than `1e-10`.
pub fn product_majorant(l: &LiouvilleMatrix, refine: bool) -> (WeightedMeasure, WeightedMeasure) {
    let (m, n) = (l.nrows(), l.ncols());
    let e = &l.entries;
    let row_zero: Vec<bool> = (0..m)
        .map(|i| e.row(i).max() <= ZERO_ROW_TOLERANCE)
        .collect();
    let col_zero: Vec<bool> = (0..n)
        .map(|j| e.column(j).max() <= ZERO_ROW_TOLERANCE)
        .collect();

    let mut mu_p: Vec<f64> = (0..m)
        .map(|i| {
            if row_zero[i] {
                0.0
            } else {
                e.row(i).max().sqrt()
            }
        })
        .collect();
    let mut mu_q: Vec<f64> = (0..n)
        .map(|j| {
            if col_zero[j] {
                0.0
            } else {
                e.column(j).max().sqrt()
            }
        })
        .collect();

    if refine {
        let mut best = uniform_constant(&mu_p, &mu_q);
        for _ in 0..MAX_REFINEMENT_ROUNDS {
            let new_p: Vec<f64> = (0..m)
                .map(|i| {
                    if row_zero[i] {
                        return 0.0;
                    }
                    (0..n)
                        .filter(|&j| mu_q[j] > 0.0)
                        .map(|j| e[(i, j)] / mu_q[j])
                        .fold(0.0, f64::max)
                })
                .collect();
            let new_q: Vec<f64> = (0..n)
                .map(|j| {
                    if col_zero[j] {
                        return 0.0;
                    }
                    (0..m)
                        .filter(|&i| new_p[i] > 0.0)
                        .map(|i| e[(i, j)] / new_p[i])
                        .fold(0.0, f64::max)
                })
                .collect();
            let k = uniform_constant(&new_p, &new_q);
            let improved = k > best + 1e-10;
            if k >= best {
                mu_p = new_p;
                mu_q = new_q;
                best = k;
            }
            if !improved {
                break;
            }
        }
    }

    (
        WeightedMeasure::new(l.row_labels.clone(), mu_p).expect("nonnegative majorant"),
        WeightedMeasure::new(l.col_labels.clone(), mu_q).expect("nonnegative majorant"),
    )
}

/// Projector onto the span of the given columns of a basis.
pub fn span_projector(basis: &Basis, columns: &[usize]) -> HermitianOperator {
    let w = basis.columns.select_columns(columns);
    HermitianOperator::hermitize(&w * w.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;
    use crate::random::{random_density, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_basis(d: usize, rng: &mut ChaCha8Rng) -> Basis {
        Basis::new(random_unitary(d, rng)).unwrap()
    }

    #[test]
    fn standard_basis_povm() {
        let p = povm_from_basis(&Basis::standard(2));
        assert_eq!(
            p.elements()[0],
            HermitianOperator::from_real_diagonal(&[1.0, 0.0])
        );
        assert_eq!(
            p.elements()[1],
            HermitianOperator::from_real_diagonal(&[0.0, 1.0])
        );
    }

    #[test]
    fn hadamard_projectors_have_half_entries() {
        let p = povm_from_basis(&dft_basis(2));
        for e in p.elements() {
            for z in e.matrix().iter() {
                assert!((z.norm() - 0.5).abs() < 1e-15);
                assert!(z.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn non_orthonormal_rejected() {
        let v = DVector::from_vec(vec![c(1.0), c(0.0)]);
        let w = DVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(matches!(
            Basis::from_vectors(&[v, w]),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn compress_with_identity_is_unchanged_up_to_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = povm_from_basis(&random_basis(3, &mut rng));
        let q = povm_compress(&p, &HermitianOperator::identity(3)).unwrap();
        // Spectra of the elements are basis independent.
        for (a, b) in p.elements().iter().zip(q.elements()) {
            let ea = a.eig().eigenvalues;
            let eb = b.eig().eigenvalues;
            for (x, y) in ea.iter().zip(&eb) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compress_standard_basis_to_plane() {
        let p = povm_from_basis(&Basis::standard(3));
        let proj = HermitianOperator::from_real_diagonal(&[1.0, 1.0, 0.0]);
        let q = povm_compress(&p, &proj).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.len(), 3);
        assert!(max_abs(q.elements()[2].matrix()) < 1e-15);
        for e in &q.elements()[..2] {
            let ev = e.eig().eigenvalues;
            assert!(ev[0].abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn compress_rejects_non_projector() {
        let p = povm_from_basis(&Basis::standard(2));
        let err =
            povm_compress(&p, &HermitianOperator::from_real_diagonal(&[1.0, 0.5])).unwrap_err();
        assert!(matches!(err, Error::NotProjector { .. }));
    }

    #[test]
    fn tensor_pair_standard() {
        let (p, q) = povm_tensor_pair(&Basis::standard(2), &Basis::standard(2));
        assert_eq!(
            p.elements()[0],
            HermitianOperator::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(
            q.elements()[0],
            HermitianOperator::from_real_diagonal(&[1.0, 0.0, 1.0, 0.0])
        );
        let l = liouville_matrix(&p, &q).unwrap();
        assert!(l.entries().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn tensor_pair_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (p, q) = povm_tensor_pair(&random_basis(2, &mut rng), &random_basis(3, &mut rng));
        assert_eq!((p.len(), q.len(), p.dim()), (2, 3, 6));
        for e in p.elements() {
            assert!((e.trace() - 3.0).abs() < 1e-12);
        }
        for f in q.elements() {
            assert!((f.trace() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coarsen_cases() {
        let p = povm_from_basis(&Basis::standard(4));
        assert_eq!(povm_coarsen(&p, &Partition::singletons(4)).unwrap(), p);
        let whole = povm_coarsen(&p, &Partition::whole(4)).unwrap();
        assert_eq!(whole.elements()[0], HermitianOperator::identity(4));
        let pairs = povm_coarsen(&p, &Partition::pairs(4)).unwrap();
        assert_eq!(
            pairs.elements()[0],
            HermitianOperator::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(
            pairs.elements()[1],
            HermitianOperator::from_real_diagonal(&[0.0, 0.0, 1.0, 1.0])
        );
        assert_eq!(pairs.labels(), &["0+1".to_string(), "2+3".to_string()]);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![vec![0, 1], vec![1, 2]], 3).is_err());
        assert!(Partition::new(vec![vec![0, 1]], 3).is_err());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
        assert!(Partition::new(vec![vec![2, 0], vec![1]], 3).is_ok());
    }

    #[test]
    fn measurement_examples() {
        let p = povm_from_basis(&Basis::standard(3));
        let mut v = DVector::zeros(3);
        v[0] = c(1.0);
        let nu = measurement_distribution(&DensityMatrix::pure(&v), &p).unwrap();
        assert_eq!(nu.masses(), &[1.0, 0.0, 0.0]);
        let nu = measurement_distribution(&DensityMatrix::maximally_mixed(3), &p).unwrap();
        assert!(nu.masses().iter().all(|m| (m - 1.0 / 3.0).abs() < 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(3, 2, &mut rng).unwrap();
        let nu = measurement_distribution(&rho, &povm_from_basis(&dft_basis(3))).unwrap();
        assert!((nu.total() - 1.0).abs() < 1e-10);

        assert!(matches!(
            measurement_distribution(&DensityMatrix::maximally_mixed(2), &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn liouville_of_basis_pair_is_squared_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (e, f) = (random_basis(4, &mut rng), random_basis(4, &mut rng));
        let l = liouville_matrix(&povm_from_basis(&e), &povm_from_basis(&f)).unwrap();
        let ov = e.overlaps(&f).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((l.get(i, j) - ov[(i, j)].powi(2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn liouville_standard_vs_hadamard() {
        let (e, f) = mub_pair(2);
        let l = liouville_matrix(&povm_from_basis(&e), &povm_from_basis(&f)).unwrap();
        assert!(l.entries().iter().all(|v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn liouville_total_is_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (e, f) = (random_basis(5, &mut rng), random_basis(5, &mut rng));
        let l = liouville_matrix(&povm_from_basis(&e), &povm_from_basis(&f)).unwrap();
        assert!((l.total() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn majorant_of_mub_is_half() {
        let (e, f) = mub_pair(4);
        let l = liouville_matrix(&povm_from_basis(&e), &povm_from_basis(&f)).unwrap();
        let (mp, mq) = product_majorant(&l, false);
        assert!(mp
            .masses()
            .iter()
            .chain(mq.masses())
            .all(|m| (m - 0.5).abs() < 1e-12));
    }

    #[test]
    fn majorant_of_diagonal_is_ones() {
        let l = LiouvilleMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        for refine in [false, true] {
            let (mp, mq) = product_majorant(&l, refine);
            assert_eq!(mp.masses(), &[1.0, 1.0, 1.0]);
            assert_eq!(mq.masses(), &[1.0, 1.0, 1.0]);
        }
    }

    #[test]
    fn majorant_covers_random_pair_seed_9() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (e, f) = (random_basis(3, &mut rng), random_basis(3, &mut rng));
        let l = liouville_matrix(&povm_from_basis(&e), &povm_from_basis(&f)).unwrap();
        for refine in [false, true] {
            let (mp, mq) = product_majorant(&l, refine);
            for i in 0..3 {
                for j in 0..3 {
                    assert!(mp.masses()[i] * mq.masses()[j] >= l.get(i, j) - 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_rows_get_zero_mass() {
        let l = LiouvilleMatrix::from_rows(&[vec![0.5, 0.5], vec![0.0, 0.0]]).unwrap();
        let (mp, mq) = product_majorant(&l, true);
        assert_eq!(mp.masses()[1], 0.0);
        assert!(mq.masses().iter().all(|&m| m > 0.0));
    }

    #[test]
    fn refinement_never_worsens_uniform_constant() {
        let l =
            LiouvilleMatrix::from_rows(&[vec![0.9, 0.1], vec![0.3, 0.7], vec![0.2, 0.05]]).unwrap();
        let (p0, q0) = product_majorant(&l, false);
        let (p1, q1) = product_majorant(&l, true);
        assert!(
            uniform_constant(p1.masses(), q1.masses())
                >= uniform_constant(p0.masses(), q0.masses())
        );
        l.check_majorant(&p1, &q1).unwrap();
    }

    #[test]
    fn dft_is_unitary_and_unbiased() {
        for d in 1..=16 {
            let f = dft_basis(d);
            assert!(Basis::new(f.matrix().clone()).is_ok());
            let ov = Basis::standard(d).overlaps(&f).unwrap();
            assert!(ov.iter().all(|o| (o * o - 1.0 / d as f64).abs() < 1e-10));
        }
        let f2 = dft_basis(2);
        assert!((f2.matrix()[(1, 1)].re + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn invalid_povm_rejected() {
        let half = HermitianOperator::from_real_diagonal(&[0.5, 0.5]);
        assert!(FinitePovm::with_index_labels(vec![half.clone()]).is_err());
        let neg = HermitianOperator::from_real_diagonal(&[1.5, -0.5]);
        let rest = HermitianOperator::from_real_diagonal(&[-0.5, 1.5]);
        assert!(FinitePovm::with_index_labels(vec![neg, rest]).is_err());
        assert!(FinitePovm::with_index_labels(vec![half.clone(), half]).is_ok());
    }
}
