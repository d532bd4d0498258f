//! θ-parameterized product preparations, projective measurement bases, Born
//! probability tables, and the exclusion structure: for each measurement
//! outcome, which preparation it rules out with certainty.
//!
//! The central certified fact: against the closed-form eigenbasis of the
//! three-spin Hamiltonian, the eight product preparations admit a perfect
//! exclusion matching — a permutation pairing every outcome with a
//! preparation it never occurs on — and that permutation is the same for
//! every admissible θ. The naive identity pairing (outcome i with
//! preparation i) is **not** such a matching; the witness is the pair
//! (e₂, Ψ⁽²⁾) with Born probability cos²(θ/2)·sin⁴(θ/2) > 0.

use crate::hamiltonian::eigensystem_kets;
use crate::linalg::{
    inner_product, max_abs_diff, tensor_product, OperatorMatrix, StateVector, NORM_TOL,
};
use crate::{Error, Result};

/// Amplitude magnitudes at or below this threshold count as exclusion edges.
/// True zeros of the closed-form construction land at rounding scale
/// (≤ 1e−16); genuinely nonzero amplitudes stay orders of magnitude above.
pub const ZERO_AMPLITUDE_TOL: f64 = 1e-12;

/// Probability bound the verification suite demands of every matched pair.
pub const MATCHED_PROBABILITY_TOL: f64 = 1e-24;

// ---------------------------------------------------------------------------
// Preparations
// ---------------------------------------------------------------------------

/// The eight θ-parameterized product preparations Ψ⁽¹⁾…Ψ⁽⁸⁾ together with
/// the single-qubit states they are built from.
///
/// The half-angle states (with c = cos(θ/2), s = sin(θ/2)):
/// m = (c, −s), n = (c, s), and their exact orthogonal complements
/// m̄ = (s, c), n̄ = (−s, c). Party A draws from {m, n}, party B from
/// {m, n̄}, party C from {m̄, n̄}; preparation index 1..8 enumerates the
/// choices big-endian (A is the most significant bit).
#[derive(Debug, Clone)]
pub struct PreparationFamily {
    theta: f64,
    m: StateVector,
    n: StateVector,
    m_perp: StateVector,
    n_perp: StateVector,
    preparations: Vec<StateVector>,
}

impl PreparationFamily {
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn m(&self) -> &StateVector {
        &self.m
    }
    pub fn n(&self) -> &StateVector {
        &self.n
    }
    /// The state exactly orthogonal to m.
    pub fn m_perp(&self) -> &StateVector {
        &self.m_perp
    }
    /// The state exactly orthogonal to n.
    pub fn n_perp(&self) -> &StateVector {
        &self.n_perp
    }
    /// All eight product preparations in enumeration order.
    pub fn preparations(&self) -> &[StateVector] {
        &self.preparations
    }
    /// One preparation by 1-based index.
    pub fn preparation(&self, index: usize) -> Result<&StateVector> {
        if index == 0 || index > self.preparations.len() {
            return Err(Error::InvalidParameter {
                name: "preparation",
                message: format!(
                    "index {index} outside 1..={}",
                    self.preparations.len()
                ),
            });
        }
        Ok(&self.preparations[index - 1])
    }
}

/// Builds the preparation family at angle θ.
///
/// θ must lie strictly inside (0, π/2): at the boundary the two single-qubit
/// states m and n become orthogonal (or identical) and the overlap the
/// exclusion protocol probes disappears.
pub fn build_preparations(theta: f64) -> Result<PreparationFamily> {
    if !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    if theta <= 0.0 || theta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidParameter {
            name: "theta",
            message: format!(
                "theta = {theta} must lie strictly between 0 and pi/2; at the boundary \
                 the overlapping pair of single-qubit states degenerates and the \
                 exclusion protocol loses its subject"
            ),
        });
    }
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let m = StateVector::from_real(&[c, -s])?;
    let n = StateVector::from_real(&[c, s])?;
    let m_perp = StateVector::from_real(&[s, c])?;
    let n_perp = StateVector::from_real(&[-s, c])?;

    let mut preparations = Vec::with_capacity(8);
    for bits in 0..8usize {
        let a_state = if bits & 0b100 == 0 { &m } else { &n };
        let b_state = if bits & 0b010 == 0 { &m } else { &n_perp };
        let c_state = if bits & 0b001 == 0 { &m_perp } else { &n_perp };
        preparations.push(tensor_product(&[
            a_state.clone(),
            b_state.clone(),
            c_state.clone(),
        ])?);
    }
    Ok(PreparationFamily {
        theta,
        m,
        n,
        m_perp,
        n_perp,
        preparations,
    })
}

/// `points` equally spaced θ values strictly inside (0, π/2):
/// θ_k = (π/2)·k/(points+1) for k = 1..points.
pub fn theta_grid(points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidParameter {
            name: "grid",
            message: "grid must contain at least one point".to_string(),
        });
    }
    let step = std::f64::consts::FRAC_PI_2 / (points as f64 + 1.0);
    Ok((1..=points).map(|k| k as f64 * step).collect())
}

/// The certification grid: 99 equally spaced interior points of (0, π/2)
/// plus the named fixtures π/6, π/4, π/3.
pub fn certification_grid() -> Vec<f64> {
    let mut grid = theta_grid(99).expect("static grid");
    grid.extend([
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_3,
    ]);
    grid
}

// ---------------------------------------------------------------------------
// Measurement bases
// ---------------------------------------------------------------------------

/// An orthonormal, complete projective measurement basis: one rank-1
/// projector per outcome.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    outcomes: Vec<StateVector>,
}

impl MeasurementBasis {
    /// Validates that the outcome states form a complete orthonormal basis:
    /// as many normalized states as dimensions, mutually orthogonal within
    /// [`NORM_TOL`].
    pub fn new(outcomes: Vec<StateVector>) -> Result<Self> {
        let dim = match outcomes.first() {
            Some(v) => v.dim(),
            None => return Err(Error::EmptyTensorProduct),
        };
        if outcomes.len() != dim {
            return Err(Error::InvalidDimension {
                dim: outcomes.len(),
                reason: "a complete basis needs exactly as many outcomes as dimensions",
            });
        }
        let mut worst: f64 = 0.0;
        for (i, x) in outcomes.iter().enumerate() {
            for (j, y) in outcomes.iter().enumerate() {
                let overlap = inner_product(x, y)?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((overlap - target).norm());
            }
        }
        if worst > NORM_TOL {
            return Err(Error::NotOrthonormal { deviation: worst });
        }
        Ok(Self { outcomes })
    }

    pub fn outcomes(&self) -> &[StateVector] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.outcomes.first().map(StateVector::dim).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// One outcome state by 1-based index.
    pub fn outcome(&self, index: usize) -> Result<&StateVector> {
        if index == 0 || index > self.outcomes.len() {
            return Err(Error::InvalidParameter {
                name: "outcome",
                message: format!("index {index} outside 1..={}", self.outcomes.len()),
            });
        }
        Ok(&self.outcomes[index - 1])
    }

    /// The rank-1 projector onto one outcome (1-based index).
    pub fn projector(&self, index: usize) -> Result<OperatorMatrix> {
        Ok(OperatorMatrix::projector(self.outcome(index)?))
    }

    /// max |Σᵢ |eᵢ⟩⟨eᵢ| − I| — zero for a complete basis.
    pub fn completeness_deviation(&self) -> Result<f64> {
        let dim = self.dim();
        let mut sum = OperatorMatrix::zeros(dim)?;
        for outcome in &self.outcomes {
            sum = sum.add(&OperatorMatrix::projector(outcome))?;
        }
        max_abs_diff(&sum, &OperatorMatrix::identity(dim)?)
    }
}

/// The exclusion measurement basis: the eight closed-form Hamiltonian
/// eigenvectors in catalog order. The amplitudes are constants, so this
/// basis is independent of both θ and the coupling parameters.
pub fn exclusion_basis() -> MeasurementBasis {
    MeasurementBasis::new(eigensystem_kets()).expect("static orthonormal kets")
}

// ---------------------------------------------------------------------------
// Born probabilities and tables
// ---------------------------------------------------------------------------

/// Born rule: |⟨outcome|state⟩|². Both states must be normalized and of
/// equal dimension.
pub fn born_probability(state: &StateVector, outcome: &StateVector) -> Result<f64> {
    state.ensure_normalized()?;
    outcome.ensure_normalized()?;
    Ok(inner_product(outcome, state)?.norm_sqr())
}

/// The full table of amplitude magnitudes |⟨e_j|Ψ⁽ⁱ⁾⟩|:
/// rows index preparations, columns outcomes.
pub fn amplitude_table(
    family: &PreparationFamily,
    basis: &MeasurementBasis,
) -> Result<Vec<Vec<f64>>> {
    family
        .preparations()
        .iter()
        .map(|prep| {
            basis
                .outcomes()
                .iter()
                .map(|outcome| Ok(inner_product(outcome, prep)?.norm()))
                .collect()
        })
        .collect()
}

/// The full Born probability table: rows index preparations, columns
/// outcomes. Every row sums to 1 (the basis is complete).
pub fn probability_table(
    family: &PreparationFamily,
    basis: &MeasurementBasis,
) -> Result<Vec<Vec<f64>>> {
    family
        .preparations()
        .iter()
        .map(|prep| {
            basis
                .outcomes()
                .iter()
                .map(|outcome| born_probability(prep, outcome))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Exclusion matching
// ---------------------------------------------------------------------------

/// A perfect exclusion matching: a permutation pairing every measurement
/// outcome with the preparation it excludes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionMatching {
    /// excluded[i] = 0-based preparation index excluded by outcome i.
    excluded: Vec<usize>,
}

impl ExclusionMatching {
    /// The preparation index (1-based) excluded by the given outcome index
    /// (1-based).
    pub fn excluded_preparation(&self, outcome: usize) -> Result<usize> {
        if outcome == 0 || outcome > self.excluded.len() {
            return Err(Error::InvalidParameter {
                name: "outcome",
                message: format!("index {outcome} outside 1..={}", self.excluded.len()),
            });
        }
        Ok(self.excluded[outcome - 1] + 1)
    }

    /// The whole permutation as 1-based preparation indices, one per outcome
    /// in outcome order.
    pub fn as_one_based(&self) -> Vec<usize> {
        self.excluded.iter().map(|&p| p + 1).collect()
    }

    /// The inverse map: for each preparation (0-based), the 0-based outcome
    /// that excludes it.
    pub fn outcome_excluding(&self, preparation: usize) -> Result<usize> {
        self.excluded
            .iter()
            .position(|&p| p == preparation)
            .ok_or_else(|| Error::InvalidParameter {
                name: "preparation",
                message: format!(
                    "index {preparation} outside 0..{}",
                    self.excluded.len()
                ),
            })
    }

    pub fn len(&self) -> usize {
        self.excluded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excluded.is_empty()
    }
}

/// Searches the zero-amplitude adjacency for a perfect matching, assigning
/// outcomes in ascending order and trying preparations in ascending order,
/// so the first matching found is the lexicographically smallest
/// permutation.
fn perfect_matching(adjacency: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = adjacency.len();
    let mut assignment = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn assign(
        adjacency: &[Vec<bool>],
        assignment: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let outcome = assignment.len();
        if outcome == adjacency.len() {
            return true;
        }
        for prep in 0..adjacency.len() {
            if !used[prep] && adjacency[outcome][prep] {
                used[prep] = true;
                assignment.push(prep);
                if assign(adjacency, assignment, used) {
                    return true;
                }
                assignment.pop();
                used[prep] = false;
            }
        }
        false
    }
    if assign(adjacency, &mut assignment, &mut used) {
        Some(assignment)
    } else {
        None
    }
}

/// Computes the amplitude table, builds the zero-adjacency graph
/// (|amplitude| ≤ [`ZERO_AMPLITUDE_TOL`]), and returns the
/// lexicographically smallest perfect exclusion matching together with the
/// largest matched amplitude actually observed.
///
/// If no perfect matching exists the error carries the full amplitude table
/// — that outcome would falsify the exclusion protocol itself, not the
/// implementation.
pub fn find_exclusion_matching(
    family: &PreparationFamily,
    basis: &MeasurementBasis,
) -> Result<(ExclusionMatching, f64)> {
    if basis.len() != family.preparations().len() {
        return Err(Error::DimensionMismatch {
            left: family.preparations().len(),
            right: basis.len(),
        });
    }
    let table = amplitude_table(family, basis)?;
    // adjacency[outcome][prep]
    let n = basis.len();
    let mut adjacency = vec![vec![false; n]; n];
    for (prep, row) in table.iter().enumerate() {
        for (outcome, &amp) in row.iter().enumerate() {
            adjacency[outcome][prep] = amp <= ZERO_AMPLITUDE_TOL;
        }
    }
    match perfect_matching(&adjacency) {
        Some(excluded) => {
            let worst = excluded
                .iter()
                .enumerate()
                .map(|(outcome, &prep)| table[prep][outcome])
                .fold(0.0, f64::max);
            Ok((ExclusionMatching { excluded }, worst))
        }
        None => Err(Error::NoPerfectMatching {
            amplitude_table: table,
        }),
    }
}

/// Born probabilities of the identity pairing: element i (0-based) is
/// |⟨e_{i+1}|Ψ⁽ⁱ⁺¹⁾⟩|². The identity pairing is not an exclusion matching;
/// index 2 (1-based) is the canonical nonzero witness.
pub fn identity_pairing_probabilities(
    family: &PreparationFamily,
    basis: &MeasurementBasis,
) -> Result<Vec<f64>> {
    family
        .preparations()
        .iter()
        .zip(basis.outcomes())
        .map(|(prep, outcome)| born_probability(prep, outcome))
        .collect()
}

/// Closed form for the identity-pairing witness: the Born probability of
/// outcome e₂ on preparation Ψ⁽²⁾ is cos²(θ/2)·sin⁴(θ/2), strictly positive
/// on (0, π/2). At θ = π/3 this is 3/64.
pub fn identity_mismatch_probability(theta: f64) -> f64 {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    c * c * s * s * s * s
}

// ---------------------------------------------------------------------------
// The two-qubit exclusion protocol
// ---------------------------------------------------------------------------

/// The original two-qubit exclusion protocol: four product preparations,
/// a four-outcome entangled basis, the identity exclusion matching, and the
/// full probability table.
#[derive(Debug, Clone)]
pub struct TwoQubitProtocol {
    pub preparations: Vec<StateVector>,
    pub basis: MeasurementBasis,
    pub matching: ExclusionMatching,
    pub max_matched_amplitude: f64,
    /// Born table, rows = preparations, columns = outcomes.
    pub probability_table: Vec<Vec<f64>>,
}

/// Builds the two-qubit protocol: preparations |00⟩, |0+⟩, |+0⟩, |++⟩ and
/// the entangled basis
/// ξ₁ = (|01⟩+|10⟩)/√2, ξ₂ = (|0−⟩+|1+⟩)/√2,
/// ξ₃ = (|+1⟩+|−0⟩)/√2, ξ₄ = (|+−⟩+|−+⟩)/√2,
/// for which each ξᵢ is orthogonal to the i-th preparation — the matching
/// is the identity permutation, with exactly zero matched amplitudes.
pub fn pbr_two_qubit_protocol() -> Result<TwoQubitProtocol> {
    let zero = StateVector::from_real(&[1.0, 0.0])?;
    let one = StateVector::from_real(&[0.0, 1.0])?;
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_real(&[inv, inv])?;
    let minus = StateVector::from_real(&[inv, -inv])?;

    let pair = |x: &StateVector, y: &StateVector| tensor_product(&[x.clone(), y.clone()]);
    let preparations = vec![
        pair(&zero, &zero)?,
        pair(&zero, &plus)?,
        pair(&plus, &zero)?,
        pair(&plus, &plus)?,
    ];

    let superpose = |x: &StateVector, y: &StateVector| -> Result<StateVector> {
        let amps: Vec<_> = x
            .amplitudes()
            .iter()
            .zip(y.amplitudes())
            .map(|(p, q)| (p + q) * inv)
            .collect();
        StateVector::new(amps)
    };
    let basis = MeasurementBasis::new(vec![
        superpose(&pair(&zero, &one)?, &pair(&one, &zero)?)?,
        superpose(&pair(&zero, &minus)?, &pair(&one, &plus)?)?,
        superpose(&pair(&plus, &one)?, &pair(&minus, &zero)?)?,
        superpose(&pair(&plus, &minus)?, &pair(&minus, &plus)?)?,
    ])?;

    let table: Vec<Vec<f64>> = preparations
        .iter()
        .map(|prep| {
            basis
                .outcomes()
                .iter()
                .map(|outcome| born_probability(prep, outcome))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut worst: f64 = 0.0;
    for (i, prep) in preparations.iter().enumerate() {
        let amp = inner_product(basis.outcome(i + 1)?, prep)?.norm();
        worst = worst.max(amp);
        if amp > ZERO_AMPLITUDE_TOL {
            return Err(Error::NoPerfectMatching {
                amplitude_table: preparations
                    .iter()
                    .map(|p| {
                        basis
                            .outcomes()
                            .iter()
                            .map(|o| Ok(inner_product(o, p)?.norm()))
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<_>>()?,
            });
        }
    }

    Ok(TwoQubitProtocol {
        preparations,
        basis,
        matching: ExclusionMatching {
            excluded: vec![0, 1, 2, 3],
        },
        max_matched_amplitude: worst,
        probability_table: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn single_qubit_states_at_pi_over_three() {
        let family = build_preparations(FRAC_PI_3).unwrap();
        let root3_half = 3.0f64.sqrt() / 2.0;
        assert!((family.m().amplitude(0).re - root3_half).abs() <= 1e-15);
        assert!((family.m().amplitude(1).re + 0.5).abs() <= 1e-15);
        assert!((family.n_perp().amplitude(0).re + 0.5).abs() <= 1e-15);
        assert!((family.n_perp().amplitude(1).re - root3_half).abs() <= 1e-15);

        let overlap = inner_product(family.m(), family.n()).unwrap();
        assert!((overlap.re - 0.5).abs() <= 1e-15);
        assert_eq!(overlap.im, 0.0);
        // The complements are exactly orthogonal by construction: the inner
        // products cancel as c·s − s·c.
        assert_eq!(inner_product(family.m_perp(), family.m()).unwrap().re, 0.0);
        assert_eq!(inner_product(family.n_perp(), family.n()).unwrap().re, 0.0);
    }

    #[test]
    fn overlap_tracks_cos_theta_across_grid() {
        for theta in certification_grid() {
            let family = build_preparations(theta).unwrap();
            let mn = inner_product(family.m(), family.n()).unwrap().re;
            let mn_perp = inner_product(family.m_perp(), family.n_perp()).unwrap().re;
            assert!((mn - theta.cos()).abs() <= 1e-15);
            assert!((mn_perp - theta.cos()).abs() <= 1e-15);
            assert!((mn * mn - theta.cos().powi(2)).abs() <= 1e-12);
        }
    }

    #[test]
    fn boundary_angles_are_rejected() {
        for theta in [0.0, PI / 2.0, -0.3, PI, f64::NAN] {
            assert!(build_preparations(theta).is_err(), "theta = {theta}");
        }
        // Interior values are accepted arbitrarily close to the boundary.
        assert!(build_preparations(1e-9).is_ok());
        assert!(build_preparations(PI / 2.0 - 1e-9).is_ok());
    }

    #[test]
    fn preparations_follow_the_party_enumeration() {
        let family = build_preparations(0.7).unwrap();
        for bits in 0..8usize {
            let a = if bits & 4 == 0 { family.m() } else { family.n() };
            let b = if bits & 2 == 0 { family.m() } else { family.n_perp() };
            let c = if bits & 1 == 0 { family.m_perp() } else { family.n_perp() };
            let expected = tensor_product(&[a.clone(), b.clone(), c.clone()]).unwrap();
            let got = family.preparation(bits + 1).unwrap();
            for k in 0..8 {
                assert_eq!(got.amplitude(k), expected.amplitude(k));
            }
        }
        assert!(family.preparation(0).is_err());
        assert!(family.preparation(9).is_err());
    }

    #[test]
    fn probability_rows_sum_to_one_on_grid() {
        let basis = exclusion_basis();
        for theta in certification_grid() {
            let family = build_preparations(theta).unwrap();
            let table = probability_table(&family, &basis).unwrap();
            for row in table {
                let sum: f64 = row.iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12, "theta = {theta}");
            }
        }
    }

    #[test]
    fn matching_is_the_frozen_permutation_for_all_theta() {
        let basis = exclusion_basis();
        let mut permutations = Vec::new();
        for theta in certification_grid() {
            let family = build_preparations(theta).unwrap();
            let (matching, worst) = find_exclusion_matching(&family, &basis).unwrap();
            assert!(worst <= 1e-15, "matched amplitude {worst:.3e} at theta {theta}");
            permutations.push(matching.as_one_based());
        }
        for perm in &permutations {
            assert_eq!(*perm, vec![1, 6, 5, 2, 3, 8, 4, 7]);
        }
    }

    #[test]
    fn matched_probabilities_meet_the_certified_bound() {
        let basis = exclusion_basis();
        for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, 0.1, 1.5] {
            let family = build_preparations(theta).unwrap();
            let (matching, _) = find_exclusion_matching(&family, &basis).unwrap();
            let table = probability_table(&family, &basis).unwrap();
            for outcome in 1..=8 {
                let prep = matching.excluded_preparation(outcome).unwrap();
                assert!(table[prep - 1][outcome - 1] <= MATCHED_PROBABILITY_TOL);
            }
        }
    }

    #[test]
    fn identity_pairing_fails_exactly_at_the_witness() {
        let basis = exclusion_basis();
        let family = build_preparations(FRAC_PI_3).unwrap();
        let probs = identity_pairing_probabilities(&family, &basis).unwrap();
        // Outcome 1 does exclude preparation 1...
        assert!(probs[0] <= MATCHED_PROBABILITY_TOL);
        // ...but outcome 2 sees preparation 2 with probability 3/64.
        assert!((probs[1] - 3.0 / 64.0).abs() <= 1e-12);
        assert!(
            (probs[1] - identity_mismatch_probability(FRAC_PI_3)).abs() <= 1e-12
        );
        for theta in certification_grid() {
            let family = build_preparations(theta).unwrap();
            let probs = identity_pairing_probabilities(&family, &basis).unwrap();
            assert!((probs[1] - identity_mismatch_probability(theta)).abs() <= 1e-12);
            assert!(probs[1] > ZERO_AMPLITUDE_TOL);
        }
    }

    #[test]
    fn computational_basis_admits_no_matching() {
        let family = build_preparations(FRAC_PI_3).unwrap();
        let basis = MeasurementBasis::new(
            (0..8)
                .map(|k| StateVector::basis_state(8, k).unwrap())
                .collect(),
        )
        .unwrap();
        match find_exclusion_matching(&family, &basis) {
            Err(Error::NoPerfectMatching { amplitude_table }) => {
                assert_eq!(amplitude_table.len(), 8);
                for row in &amplitude_table {
                    assert_eq!(row.len(), 8);
                    for &amp in row {
                        assert!(amp > ZERO_AMPLITUDE_TOL);
                    }
                }
            }
            other => panic!("expected NoPerfectMatching, got {other:?}"),
        }
    }

    #[test]
    fn born_probability_examples() {
        let protocol = pbr_two_qubit_protocol().unwrap();
        let prep00 = &protocol.preparations[0];
        let xi1 = protocol.basis.outcome(1).unwrap();
        let xi4 = protocol.basis.outcome(4).unwrap();
        assert_eq!(born_probability(prep00, xi1).unwrap(), 0.0);
        assert!((born_probability(prep00, xi4).unwrap() - 0.5).abs() <= 1e-15);
        assert!((born_probability(xi1, xi1).unwrap() - 1.0).abs() <= 1e-15);

        let small = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert!(born_probability(&small, xi1).is_err());
    }

    #[test]
    fn two_qubit_protocol_matches_the_closed_form_table() {
        let protocol = pbr_two_qubit_protocol().unwrap();
        assert_eq!(protocol.matching.as_one_based(), vec![1, 2, 3, 4]);
        assert_eq!(protocol.max_matched_amplitude, 0.0);
        assert!(protocol.basis.completeness_deviation().unwrap() <= 1e-12);
        let expected = [
            [0.0, 0.25, 0.25, 0.5],
            [0.25, 0.0, 0.5, 0.25],
            [0.25, 0.5, 0.0, 0.25],
            [0.5, 0.25, 0.25, 0.0],
        ];
        for (row, want_row) in protocol.probability_table.iter().zip(expected) {
            for (&got, want) in row.iter().zip(want_row) {
                assert!((got - want).abs() <= 1e-12);
            }
        }
        let xi2 = protocol.basis.outcome(2).unwrap();
        let xi3 = protocol.basis.outcome(3).unwrap();
        assert!(inner_product(xi2, xi3).unwrap().norm() <= 1e-15);
    }

    #[test]
    fn grid_shapes() {
        let grid = theta_grid(99).unwrap();
        assert_eq!(grid.len(), 99);
        assert!(grid[0] > 0.0);
        assert!(grid[98] < PI / 2.0);
        let step = grid[1] - grid[0];
        for pair in grid.windows(2) {
            assert!((pair[1] - pair[0] - step).abs() <= 1e-12);
        }
        let cert = certification_grid();
        assert_eq!(cert.len(), 102);
        assert!(cert.contains(&FRAC_PI_6));
        assert!(cert.contains(&FRAC_PI_4));
        assert!(cert.contains(&FRAC_PI_3));
        assert!(theta_grid(0).is_err());
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let v = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let w = StateVector::from_real(&[0.8, 0.6]).unwrap();
        match MeasurementBasis::new(vec![v.clone(), w]) {
            Err(Error::NotOrthonormal { deviation }) => assert!(deviation > 0.5),
            other => panic!("expected NotOrthonormal, got {other:?}"),
        }
        assert!(MeasurementBasis::new(vec![v]).is_err());
    }
}
