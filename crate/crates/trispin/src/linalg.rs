//! Dense complex linear algebra for small Hilbert spaces: state vectors,
//! operator matrices, tensor products, inner products, and a deterministic
//! Hermitian eigensolver based on cyclic complex Jacobi rotations.
//!
//! Everything here is a pure function on immutable values; all tolerances are
//! exposed as constants so the verification suites can reference the same
//! numbers they are tested against.

use crate::{Error, Result};
use num_complex::Complex64;

/// Complex scalar type used throughout the crate.
pub type Complex = Complex64;

/// Maximum supported Hilbert-space dimension (2¹⁰).
pub const MAX_DIM: usize = 1 << 10;

/// Tolerance on |Σ|amp|² − 1| for a vector to count as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance on max|A − A†| for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-13;

/// The Jacobi iteration stops when the off-diagonal Frobenius norm drops
/// below this factor times the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-13;

/// Eigenvalues closer than this factor times the matrix scale are grouped
/// into one degeneracy cluster.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Hard cap on Jacobi sweeps; reaching it is reported as non-convergence.
const MAX_SWEEPS: usize = 64;

fn check_finite(values: &[Complex]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Complex amplitude vector over the computational basis of n qubits.
///
/// The basis is ordered big-endian: in |q_A q_B q_C⟩ the first party occupies
/// the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex>,
}

impl StateVector {
    /// Builds a vector from amplitudes. The length must be a power of two
    /// between 1 and [`MAX_DIM`], and every amplitude must be finite.
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidDimension {
                dim,
                reason: "state dimension must be a power of two",
            });
        }
        if dim > MAX_DIM {
            return Err(Error::InvalidDimension {
                dim,
                reason: "state dimension exceeds the supported maximum",
            });
        }
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Builds a vector with real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// The computational basis state |index⟩ of the given dimension.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidDimension {
                dim,
                reason: "basis index out of range",
            });
        }
        let mut amps = vec![Complex::new(0.0, 0.0); dim];
        amps[index] = Complex::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Number of qubits (log₂ of the dimension).
    pub fn qubit_count(&self) -> u32 {
        self.amps.len().trailing_zeros()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amps[index]
    }

    /// Σ|amp|².
    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Whether |Σ|amp|² − 1| ≤ [`NORM_TOL`].
    pub fn is_normalized(&self) -> bool {
        (self.norm_squared() - 1.0).abs() <= NORM_TOL
    }

    /// Errors with the norm deviation unless the vector is normalized.
    pub fn ensure_normalized(&self) -> Result<()> {
        let deviation = (self.norm_squared() - 1.0).abs();
        if deviation <= NORM_TOL {
            Ok(())
        } else {
            Err(Error::NotNormalized { deviation })
        }
    }
}

/// Tensor product of one or more state vectors, big-endian: the first input
/// occupies the most significant bits of the output basis index.
///
/// Every input must be normalized; the output then is as well.
pub fn tensor_product(factors: &[StateVector]) -> Result<StateVector> {
    if factors.is_empty() {
        return Err(Error::EmptyTensorProduct);
    }
    let mut dim: usize = 1;
    for f in factors {
        f.ensure_normalized()?;
        dim = dim
            .checked_mul(f.dim())
            .filter(|&d| d <= MAX_DIM)
            .ok_or(Error::InvalidDimension {
                dim: usize::MAX,
                reason: "tensor product dimension exceeds the supported maximum",
            })?;
    }
    let mut amps = vec![Complex::new(1.0, 0.0)];
    for f in factors {
        let mut next = Vec::with_capacity(amps.len() * f.dim());
        for &a in &amps {
            for &b in f.amplitudes() {
                next.push(a * b);
            }
        }
        amps = next;
    }
    StateVector::new(amps)
}

/// ⟨x|y⟩, conjugate-linear in the first argument.
pub fn inner_product(x: &StateVector, y: &StateVector) -> Result<Complex> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(x.amplitudes()
        .iter()
        .zip(y.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Square complex matrix with an optional Hermitian certification flag.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex>, // row-major
    hermitian_certified: bool,
}

impl OperatorMatrix {
    /// Builds a matrix from row-major entries; `entries.len()` must equal
    /// `dim²` and every entry must be finite.
    pub fn from_entries(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidDimension {
                dim,
                reason: "matrix dimension must be between 1 and the supported maximum",
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidDimension {
                dim: entries.len(),
                reason: "entry count does not equal dim²",
            });
        }
        check_finite(&entries)?;
        Ok(Self {
            dim,
            entries,
            hermitian_certified: false,
        })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(
            dim,
            entries.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_entries(dim, vec![Complex::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m.hermitian_certified = true;
        Ok(m)
    }

    /// Rank-1 projector |v⟩⟨v|; Hermitian by construction.
    pub fn projector(v: &StateVector) -> Self {
        let dim = v.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(v.amplitude(i) * v.amplitude(j).conj());
            }
        }
        Self {
            dim,
            entries,
            hermitian_certified: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn is_hermitian_certified(&self) -> bool {
        self.hermitian_certified
    }

    /// max|A − A†| over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Certifies the matrix as Hermitian (deviation ≤ [`HERMITIAN_TOL`]) or
    /// errors with the measured deviation.
    pub fn certify_hermitian(mut self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if deviation <= HERMITIAN_TOL {
            self.hermitian_certified = true;
            Ok(self)
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(self.dim, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_entries(self.dim, entries)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
            hermitian_certified: self.hermitian_certified,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Self::from_entries(n, entries)
    }

    /// Kronecker product, big-endian: `self` occupies the most significant
    /// index bits of the result.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .filter(|&d| d <= MAX_DIM)
            .ok_or(Error::InvalidDimension {
                dim: usize::MAX,
                reason: "Kronecker product dimension exceeds the supported maximum",
            })?;
        let mut entries = vec![Complex::new(0.0, 0.0); dim * dim];
        let (n, m) = (self.dim, other.dim);
        for i1 in 0..n {
            for j1 in 0..n {
                let a = self.entries[i1 * n + j1];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..m {
                    for j2 in 0..m {
                        entries[(i1 * m + i2) * dim + (j1 * m + j2)] =
                            a * other.entries[i2 * m + j2];
                    }
                }
            }
        }
        Self::from_entries(dim, entries)
    }

    /// Applies the matrix to a vector, returning the raw (generally
    /// unnormalized) image H|v⟩.
    pub fn apply(&self, v: &StateVector) -> Result<Vec<Complex>> {
        if self.dim != v.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.dim(),
            });
        }
        let n = self.dim;
        let mut out = vec![Complex::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * v.amplitude(j);
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// max|A − B| over all entries.
pub fn max_abs_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Eigenvalue/eigenvector pairs of a Hermitian matrix, ascending by
/// eigenvalue, with near-equal eigenvalues grouped into degeneracy clusters.
///
/// Downstream comparisons on degenerate matrices must use
/// [`Spectrum::cluster_projector`], never individual eigenvectors, because
/// eigenvectors are gauge-ambiguous inside a degenerate subspace.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pairs: Vec<(f64, StateVector)>,
    degeneracy_clusters: Vec<Vec<usize>>,
}

impl Spectrum {
    /// Sorts the pairs ascending by eigenvalue and groups consecutive
    /// eigenvalues whose gap is at most `cluster_threshold` (absolute).
    pub fn from_pairs(mut pairs: Vec<(f64, StateVector)>, cluster_threshold: f64) -> Self {
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for k in 0..pairs.len() {
            let starts_new = match clusters.last().and_then(|c| c.last()) {
                Some(&prev) => (pairs[k].0 - pairs[prev].0).abs() > cluster_threshold,
                None => true,
            };
            if starts_new {
                clusters.push(vec![k]);
            } else {
                clusters.last_mut().expect("nonempty").push(k);
            }
        }
        Self {
            pairs,
            degeneracy_clusters: clusters,
        }
    }

    pub fn pairs(&self) -> &[(f64, StateVector)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|(e, _)| *e).collect()
    }

    pub fn degeneracy_clusters(&self) -> &[Vec<usize>] {
        &self.degeneracy_clusters
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Σ|v⟩⟨v| over the eigenvectors in the given cluster.
    pub fn cluster_projector(&self, cluster: &[usize]) -> Result<OperatorMatrix> {
        let dim = self.pairs.first().map(|(_, v)| v.dim()).unwrap_or(0);
        let mut p = OperatorMatrix::zeros(dim)?;
        for &k in cluster {
            p = p.add(&OperatorMatrix::projector(&self.pairs[k].1))?;
        }
        Ok(p)
    }

    /// max|G − I| where G is the Gram matrix of the eigenvectors.
    pub fn orthonormality_deviation(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, (_, vi)) in self.pairs.iter().enumerate() {
            for (j, (_, vj)) in self.pairs.iter().enumerate() {
                let g = inner_product(vi, vj)?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        Ok(worst)
    }

    /// max|Σₖ|vₖ⟩⟨vₖ| − I| — completeness of the eigenbasis.
    pub fn completeness_deviation(&self) -> Result<f64> {
        let dim = self.pairs.first().map(|(_, v)| v.dim()).unwrap_or(0);
        let all: Vec<usize> = (0..self.pairs.len()).collect();
        let p = self.cluster_projector(&all)?;
        max_abs_diff(&p, &OperatorMatrix::identity(dim)?)
    }
}

/// Deterministic Hermitian eigendecomposition by cyclic complex Jacobi
/// rotations.
///
/// The iteration sweeps all index pairs (p, q) in a fixed order, annihilating
/// each off-diagonal entry with the smaller-angle rotation (|t| ≤ π/4), and
/// stops when the off-diagonal Frobenius norm is at most
/// [`JACOBI_TOL`]·‖H‖_F. Results carry no dependence on a starting guess, so
/// repeated runs are bit-identical.
///
/// Errors if the input's Hermitian deviation exceeds [`HERMITIAN_TOL`] or if
/// the iteration fails to converge within the sweep budget.
pub fn hermitian_eigendecomposition(h: &OperatorMatrix) -> Result<Spectrum> {
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();
    let mut a: Vec<Complex> = h.entries().to_vec();
    let mut v = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex::new(1.0, 0.0);
    }
    let norm_h = h.frobenius_norm();
    let threshold = JACOBI_TOL * norm_h;

    let off_norm = |a: &[Complex]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0usize;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                off_norm: off,
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                // apq = g·e^{iφ}; the rotation
                //   U = [[c, −s·e^{iφ}], [s·e^{−iφ}, c]]
                // zeroes A'pq when tan(2t) = 2g/(α−β); take |t| ≤ π/4.
                let phase = apq / g;
                let alpha = a[p * n + p].re;
                let beta = a[q * n + q].re;
                let tau = (alpha - beta) / (2.0 * g);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_phase = phase * s; // s·e^{iφ}
                let s_phase_conj = phase.conj() * s; // s·e^{−iφ}

                // Columns p and q of A and V: M ← M·U.
                for row in 0..n {
                    let mp = a[row * n + p];
                    let mq = a[row * n + q];
                    a[row * n + p] = mp * c + mq * s_phase_conj;
                    a[row * n + q] = -mp * s_phase + mq * c;
                    let vp = v[row * n + p];
                    let vq = v[row * n + q];
                    v[row * n + p] = vp * c + vq * s_phase_conj;
                    v[row * n + q] = -vp * s_phase + vq * c;
                }
                // Rows p and q of A: A ← U†·A.
                for col in 0..n {
                    let rp = a[p * n + col];
                    let rq = a[q * n + col];
                    a[p * n + col] = rp * c + rq * s_phase;
                    a[q * n + col] = -rp * s_phase_conj + rq * c;
                }
            }
        }
    }

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let eigenvalue = a[k * n + k].re;
        let column: Vec<Complex> = (0..n).map(|row| v[row * n + k]).collect();
        pairs.push((eigenvalue, StateVector::new(column)?));
    }
    Ok(Spectrum::from_pairs(pairs, CLUSTER_TOL * norm_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn ket(amps: &[f64]) -> StateVector {
        StateVector::from_real(amps).unwrap()
    }

    #[test]
    fn basis_index_bookkeeping_is_big_endian() {
        let zero = ket(&[1.0, 0.0]);
        let one = ket(&[0.0, 1.0]);
        let v = tensor_product(&[zero.clone(), zero, one]).unwrap();
        assert_eq!(v.dim(), 8);
        for (k, amp) in v.amplitudes().iter().enumerate() {
            let expected = if k == 1 { 1.0 } else { 0.0 };
            assert_eq!(*amp, c(expected, 0.0));
        }
    }

    #[test]
    fn uniform_superposition_product() {
        let plus = ket(&[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2]);
        let v = tensor_product(&[plus.clone(), plus]).unwrap();
        for amp in v.amplitudes() {
            assert!((amp.re - 0.5).abs() <= 1e-15 && amp.im == 0.0);
        }
    }

    #[test]
    fn product_state_amplitude_closed_form() {
        // Party states at θ = π/3; the |000⟩ amplitude of the product is
        // cos²(π/6)·sin(π/6) = 3/8.
        let half = std::f64::consts::FRAC_PI_6; // θ/2
        let m = ket(&[half.cos(), -half.sin()]);
        let m_perp = ket(&[half.sin(), half.cos()]);
        let v = tensor_product(&[m.clone(), m, m_perp]).unwrap();
        assert!((v.amplitude(0).re - 0.375).abs() <= 1e-15);
    }

    #[test]
    fn tensor_product_rejects_empty_and_unnormalized() {
        assert!(matches!(
            tensor_product(&[]),
            Err(Error::EmptyTensorProduct)
        ));
        let bad = ket(&[0.5, 0.5]);
        assert!(matches!(
            tensor_product(&[bad]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn tensor_product_nesting_is_stable() {
        // Flat n-ary product equals the left-nested two-step product exactly;
        // re-association on the right agrees to within float rounding.
        let half = 0.4_f64;
        let x = ket(&[half.cos(), -half.sin()]);
        let y = ket(&[half.cos(), half.sin()]);
        let z = ket(&[half.sin(), half.cos()]);
        let flat = tensor_product(&[x.clone(), y.clone(), z.clone()]).unwrap();
        let left = tensor_product(&[tensor_product(&[x.clone(), y.clone()]).unwrap(), z.clone()])
            .unwrap();
        assert_eq!(flat.amplitudes(), left.amplitudes());
        let right = tensor_product(&[x, tensor_product(&[y, z]).unwrap()]).unwrap();
        for (a, b) in flat.amplitudes().iter().zip(right.amplitudes()) {
            assert!((a - b).norm() <= 1e-15);
        }
    }

    #[test]
    fn inner_product_examples() {
        let half = std::f64::consts::FRAC_PI_6;
        let m = ket(&[half.cos(), -half.sin()]);
        let n = ket(&[half.cos(), half.sin()]);
        let m_perp = ket(&[half.sin(), half.cos()]);
        // ⟨m|n⟩ = cos θ = 1/2 at θ = π/3.
        let ip = inner_product(&m, &n).unwrap();
        assert!((ip.re - 0.5).abs() <= 1e-15 && ip.im == 0.0);
        // ⟨m_perp|m⟩ = 0 exactly by construction.
        let z = inner_product(&m_perp, &m).unwrap();
        assert!(z.norm() <= 1e-16);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let x = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let y = StateVector::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let ip = inner_product(&x, &y).unwrap();
        assert!((ip - c(0.0, 0.6)).norm() <= 1e-15);
        assert!(matches!(
            inner_product(&x, &ket(&[1.0, 0.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn four_term_kets_are_orthogonal() {
        // Two four-term ±1/2 vectors with disjoint sign patterns.
        let e1 = ket(&[-0.5, 0.0, 0.5, -0.5, -0.5, 0.0, 0.0, 0.0]);
        let e2 = ket(&[0.5, 0.0, -0.5, -0.5, -0.5, 0.0, 0.0, 0.0]);
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));
        assert_eq!(inner_product(&e1, &e1).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn eigendecomposition_identity_and_diagonal() {
        let spectrum =
            hermitian_eigendecomposition(&OperatorMatrix::identity(4).unwrap()).unwrap();
        assert_eq!(spectrum.eigenvalues(), vec![1.0; 4]);
        assert_eq!(spectrum.degeneracy_clusters().len(), 1);

        let d = OperatorMatrix::from_real(2, &[3.0, 0.0, 0.0, -1.0]).unwrap();
        let spectrum = hermitian_eigendecomposition(&d).unwrap();
        assert_eq!(spectrum.eigenvalues(), vec![-1.0, 3.0]);
    }

    #[test]
    fn eigendecomposition_zero_matrix() {
        let z = OperatorMatrix::zeros(8).unwrap();
        let spectrum = hermitian_eigendecomposition(&z).unwrap();
        assert_eq!(spectrum.eigenvalues(), vec![0.0; 8]);
        assert!(spectrum.orthonormality_deviation().unwrap() <= 1e-15);
    }

    #[test]
    fn eigendecomposition_rejects_non_hermitian() {
        let m = OperatorMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_hermitian_eigendecompositions_are_accurate() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..25 {
            let n = 1usize << rng.gen_range(1..=5u32);
            let mut entries = vec![c(0.0, 0.0); n * n];
            for i in 0..n {
                for j in i..n {
                    let re = rng.gen_range(-1.0..1.0);
                    let im = if i == j { 0.0 } else { rng.gen_range(-1.0..1.0) };
                    entries[i * n + j] = c(re, im);
                    entries[j * n + i] = c(re, -im);
                }
            }
            let h = OperatorMatrix::from_entries(n, entries).unwrap();
            let spectrum = hermitian_eigendecomposition(&h).unwrap();

            // U†U = I to 1e−12.
            assert!(spectrum.orthonormality_deviation().unwrap() <= 1e-12);

            // U†HU = diag(E) to 1e−10·max|H|, checked as max residual of
            // H|v⟩ − E|v⟩ plus completeness.
            let scale = h.max_abs().max(f64::MIN_POSITIVE);
            for (e, v) in spectrum.pairs() {
                let hv = h.apply(v).unwrap();
                let worst = hv
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| (a - b * *e).norm())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-10 * scale, "residual {worst:.3e}");
            }
            assert!(spectrum.completeness_deviation().unwrap() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_spectrum_clusters_group_equal_eigenvalues() {
        let d = OperatorMatrix::from_real(
            4,
            &[
                4.0, 0.0, 0.0, 0.0, //
                0.0, 4.0, 0.0, 0.0, //
                0.0, 0.0, 4.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        )
        .unwrap();
        let spectrum = hermitian_eigendecomposition(&d).unwrap();
        assert_eq!(spectrum.eigenvalues(), vec![1.0, 4.0, 4.0, 4.0]);
        assert_eq!(spectrum.degeneracy_clusters(), &[vec![0], vec![1, 2, 3]]);
        let p = spectrum.cluster_projector(&[1, 2, 3]).unwrap();
        // The projector on the triply degenerate subspace is diag(1,1,1,0).
        let expected = OperatorMatrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(max_abs_diff(&p, &expected).unwrap() <= 1e-12);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 0.0, 0.0]),
            Err(Error::InvalidDimension { .. })
        ));
        assert!(matches!(
            StateVector::new(vec![c(f64::NAN, 0.0), c(0.0, 0.0)]),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            OperatorMatrix::from_real(2, &[1.0, 2.0, 3.0]),
            Err(Error::InvalidDimension { .. })
        ));
    }
}
