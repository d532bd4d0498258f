//! Finite ontological models over a product ontic space, and the
//! quantitative no-go argument: any model whose per-party epistemic states
//! overlap with masses q_A, q_B, q_C > 0 must assign one of the "forbidden"
//! (excluded) measurement outcomes a probability of at least
//! q_A·q_B·q_C / outcome_count, no matter what the response function does —
//! so no such model can reproduce the quantum exclusion statistics.
//!
//! Everything is finite and exhaustively summed: predictions are exact
//! expectations over the product distribution, not samples. A seeded
//! Monte-Carlo runner exists alongside as the laboratory-style analogue.

use crate::exclusion::{
    find_exclusion_matching, probability_table, ExclusionMatching, MeasurementBasis,
    PreparationFamily,
};
use crate::report::Node;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Tolerance on probability normalization throughout this module.
pub const PROBABILITY_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Model structure
// ---------------------------------------------------------------------------

/// One party's share of an ontological model: a finite set of labelled
/// ontic points and the two epistemic states (probability distributions
/// over those points) that the party's preparation bit chooses between.
#[derive(Debug, Clone, PartialEq)]
pub struct OnticParty {
    name: String,
    points: Vec<String>,
    state_labels: [String; 2],
    distributions: [Vec<f64>; 2],
}

fn validate_distribution(name: &'static str, dist: &[f64], points: usize) -> Result<()> {
    if dist.len() != points {
        return Err(Error::DimensionMismatch {
            left: dist.len(),
            right: points,
        });
    }
    if dist.iter().any(|&p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(&bad) = dist.iter().find(|&&p| p < 0.0) {
        return Err(Error::InvalidParameter {
            name,
            message: format!("probability {bad} is negative"),
        });
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::NotNormalized {
            deviation: (sum - 1.0).abs(),
        });
    }
    Ok(())
}

impl OnticParty {
    pub fn new(
        name: impl Into<String>,
        points: Vec<String>,
        state_labels: [String; 2],
        distributions: [Vec<f64>; 2],
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter {
                name: "party",
                message: "a party needs at least one ontic point".to_string(),
            });
        }
        if state_labels[0] == state_labels[1] {
            return Err(Error::InvalidParameter {
                name: "party",
                message: format!(
                    "the two epistemic states need distinct labels, got '{}' twice",
                    state_labels[0]
                ),
            });
        }
        for dist in &distributions {
            validate_distribution("epistemic", dist, points.len())?;
        }
        Ok(Self {
            name: name.into(),
            points,
            state_labels,
            distributions,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn points(&self) -> &[String] {
        &self.points
    }
    pub fn state_labels(&self) -> &[String; 2] {
        &self.state_labels
    }
    pub fn distributions(&self) -> &[Vec<f64>; 2] {
        &self.distributions
    }

    /// Indices of the ontic points where **both** epistemic states are
    /// strictly positive — the party's overlap region.
    pub fn overlap_region(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&k| self.distributions[0][k] > 0.0 && self.distributions[1][k] > 0.0)
            .collect()
    }

    /// The overlap mass: the smaller of the two masses the epistemic states
    /// place on the overlap region. Zero exactly when the supports are
    /// disjoint.
    pub fn overlap_mass(&self) -> f64 {
        let region = self.overlap_region();
        let mass = |dist: &[f64]| region.iter().map(|&k| dist[k]).sum::<f64>();
        // .max(0.0) turns the empty sum's -0.0 into a plain zero.
        mass(&self.distributions[0])
            .min(mass(&self.distributions[1]))
            .max(0.0)
    }
}

/// A finite ontological model: parties with epistemic states, and a
/// response function giving an outcome distribution at every joint ontic
/// point. Joint points are indexed mixed-radix big-endian (the last party's
/// point index varies fastest), matching the preparation enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OnticModel {
    parties: Vec<OnticParty>,
    /// response[joint_index][outcome]
    response: Vec<Vec<f64>>,
    outcome_count: usize,
}

impl OnticModel {
    pub fn new(
        parties: Vec<OnticParty>,
        response: Vec<Vec<f64>>,
        outcome_count: usize,
    ) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::InvalidParameter {
                name: "model",
                message: "a model needs at least one party".to_string(),
            });
        }
        if outcome_count == 0 {
            return Err(Error::InvalidParameter {
                name: "model",
                message: "a model needs at least one outcome".to_string(),
            });
        }
        let joint_count: usize = parties.iter().map(|p| p.points.len()).product();
        if response.len() != joint_count {
            return Err(Error::DimensionMismatch {
                left: response.len(),
                right: joint_count,
            });
        }
        for row in &response {
            validate_distribution("response", row, outcome_count)?;
        }
        Ok(Self {
            parties,
            response,
            outcome_count,
        })
    }

    pub fn parties(&self) -> &[OnticParty] {
        &self.parties
    }
    pub fn response(&self) -> &[Vec<f64>] {
        &self.response
    }
    pub fn outcome_count(&self) -> usize {
        self.outcome_count
    }

    pub fn joint_point_count(&self) -> usize {
        self.parties.iter().map(|p| p.points.len()).product()
    }

    /// Number of joint preparations: each party's bit picks one of its two
    /// epistemic states, big-endian (first party = most significant bit).
    pub fn preparation_count(&self) -> usize {
        1 << self.parties.len()
    }

    /// Product of the per-party overlap masses — the probability that every
    /// party's ontic point lands in its overlap region simultaneously
    /// (a lower bound, tight for the models built here).
    pub fn joint_overlap_mass(&self) -> f64 {
        self.parties.iter().map(OnticParty::overlap_mass).product()
    }

    /// Replaces the response function, revalidating the model.
    pub fn with_response(self, response: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(self.parties, response, self.outcome_count)
    }

    /// Per-party epistemic state indices selected by a preparation
    /// (1-based).
    fn selections(&self, preparation: usize) -> Result<Vec<usize>> {
        let count = self.preparation_count();
        if preparation == 0 || preparation > count {
            return Err(Error::InvalidParameter {
                name: "preparation",
                message: format!("index {preparation} outside 1..={count}"),
            });
        }
        let bits = preparation - 1;
        let n = self.parties.len();
        Ok((0..n).map(|p| (bits >> (n - 1 - p)) & 1).collect())
    }

    /// The model's outcome distribution for a preparation (1-based):
    /// the exact sum Σ_λ μ₁(λ₁)···μ_n(λ_n) · response(λ, ·) over the whole
    /// finite joint space. Preparation independence is structural — the
    /// weight factorizes through the product distribution.
    pub fn prediction(&self, preparation: usize) -> Result<Vec<f64>> {
        let selections = self.selections(preparation)?;
        let n = self.parties.len();
        let mut out = vec![0.0; self.outcome_count];
        let mut point = vec![0usize; n];
        for (joint, row) in self.response.iter().enumerate() {
            let mut rest = joint;
            for p in (0..n).rev() {
                let size = self.parties[p].points.len();
                point[p] = rest % size;
                rest /= size;
            }
            let mut weight = 1.0;
            for p in 0..n {
                weight *= self.parties[p].distributions[selections[p]][point[p]];
            }
            for (acc, &r) in out.iter_mut().zip(row) {
                *acc += weight * r;
            }
        }
        Ok(out)
    }

    /// Draws `samples` outcomes for a preparation (1-based) and returns the
    /// empirical outcome frequencies. Deterministic for a fixed seed: the
    /// generator is ChaCha12 seeded with `seed`, on a stream dedicated to
    /// this preparation index, so per-preparation runs are independent and
    /// individually reproducible.
    pub fn monte_carlo_run(
        &self,
        preparation: usize,
        samples: u64,
        seed: u64,
    ) -> Result<Vec<f64>> {
        if samples == 0 {
            return Err(Error::InvalidParameter {
                name: "samples",
                message: "at least one sample is required".to_string(),
            });
        }
        let selections = self.selections(preparation)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(preparation as u64);

        fn sample_index(weights: &[f64], u: f64) -> usize {
            let mut cumulative = 0.0;
            let mut last_positive = 0;
            for (k, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    last_positive = k;
                }
                cumulative += w;
                if u < cumulative {
                    return k;
                }
            }
            // u landed beyond the accumulated total (rounding); return the
            // last point with positive mass.
            last_positive
        }

        let mut counts = vec![0u64; self.outcome_count];
        let n = self.parties.len();
        for _ in 0..samples {
            let mut joint = 0usize;
            for p in 0..n {
                let dist = &self.parties[p].distributions[selections[p]];
                let u: f64 = rng.gen();
                joint = joint * self.parties[p].points.len() + sample_index(dist, u);
            }
            let u: f64 = rng.gen();
            let outcome = sample_index(&self.response[joint], u);
            counts[outcome] += 1;
        }
        Ok(counts
            .into_iter()
            .map(|c| c as f64 / samples as f64)
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Model constructors
// ---------------------------------------------------------------------------

/// The ψ-ontic reference model for the three-spin protocol: one ontic point
/// per single-party pure state, with point-mass epistemic states (disjoint
/// supports, overlap mass exactly zero per party). The response at each
/// joint point is the Born row of the corresponding product preparation, so
/// the model reproduces the quantum table identically.
pub fn build_psi_ontic_model(
    family: &PreparationFamily,
    basis: &MeasurementBasis,
) -> Result<OnticModel> {
    let point_mass = |index: usize| -> Vec<f64> {
        let mut d = vec![0.0, 0.0];
        d[index] = 1.0;
        d
    };
    let party = |name: &str, first: &str, second: &str| -> Result<OnticParty> {
        OnticParty::new(
            name,
            vec![format!("lambda_{first}"), format!("lambda_{second}")],
            [first.to_string(), second.to_string()],
            [point_mass(0), point_mass(1)],
        )
    };
    let parties = vec![
        party("A", "m", "n")?,
        party("B", "m", "n_perp")?,
        party("C", "m_perp", "n_perp")?,
    ];
    // Joint point (i, j, k) is exactly the ontic support of preparation
    // i·4 + j·2 + k + 1, so the response table is the Born table row by row.
    let response = probability_table(family, basis)?;
    OnticModel::new(parties, response, basis.len())
}

/// A deliberately ψ-epistemic toy model: each party has three ontic points
/// {only_first, shared, only_second}; both of its epistemic states put mass
/// q on `shared` and the remainder on their private point. The response is
/// uniform over the outcomes at every joint point — maximally noncommittal,
/// and (for q > 0) necessarily inconsistent with the exclusion statistics.
pub fn build_overlap_toy_model(q: f64) -> Result<OnticModel> {
    if !q.is_finite() || q <= 0.0 || q > 1.0 {
        return Err(Error::InvalidParameter {
            name: "q",
            message: format!("overlap mass q = {q} must lie in (0, 1]"),
        });
    }
    let points = || {
        vec![
            "only_first".to_string(),
            "shared".to_string(),
            "only_second".to_string(),
        ]
    };
    let distributions = [vec![1.0 - q, q, 0.0], vec![0.0, q, 1.0 - q]];
    let parties = vec![
        OnticParty::new(
            "A",
            points(),
            ["m".to_string(), "n".to_string()],
            distributions.clone(),
        )?,
        OnticParty::new(
            "B",
            points(),
            ["m".to_string(), "n_perp".to_string()],
            distributions.clone(),
        )?,
        OnticParty::new(
            "C",
            points(),
            ["m_perp".to_string(), "n_perp".to_string()],
            distributions,
        )?,
    ];
    let outcome_count = 8;
    let uniform = vec![1.0 / outcome_count as f64; outcome_count];
    let response = vec![uniform; 27];
    OnticModel::new(parties, response, outcome_count)
}

// ---------------------------------------------------------------------------
// The contradiction bound and consistency checking
// ---------------------------------------------------------------------------

/// The largest probability the model assigns to any preparation's forbidden
/// outcome — the outcome the exclusion matching says should never occur on
/// that preparation.
///
/// For any model whose joint overlap mass Q = q_A·q_B·q_C is positive, this
/// is at least Q/outcome_count regardless of the response function: on the
/// joint overlap cell every preparation induces the same point distribution,
/// the response there sums to 1 over the outcomes, so some outcome gets at
/// least 1/outcome_count — and that outcome is forbidden for one of the
/// preparations.
pub fn forbidden_outcome_bound(
    model: &OnticModel,
    matching: &ExclusionMatching,
) -> Result<f64> {
    if matching.len() != model.preparation_count() {
        return Err(Error::DimensionMismatch {
            left: matching.len(),
            right: model.preparation_count(),
        });
    }
    if matching.len() != model.outcome_count() {
        return Err(Error::DimensionMismatch {
            left: matching.len(),
            right: model.outcome_count(),
        });
    }
    let mut worst: f64 = 0.0;
    for preparation in 1..=model.preparation_count() {
        let prediction = model.prediction(preparation)?;
        let forbidden = matching.outcome_excluding(preparation - 1)?;
        worst = worst.max(prediction[forbidden]);
    }
    Ok(worst)
}

/// One forbidden-outcome constraint the model violates: the preparation,
/// the outcome the matching forbids on it, and the probability the model
/// nevertheless predicts. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ForbiddenOutcomeViolation {
    pub preparation: usize,
    pub outcome: usize,
    pub predicted: f64,
}

/// Result of checking a model against the quantum statistics.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    /// max |model − quantum| over all (preparation, outcome) pairs.
    pub max_deviation: f64,
    /// The tolerance the check ran at.
    pub eps: f64,
    /// True iff `max_deviation ≤ eps`.
    pub passes: bool,
    /// Forbidden-outcome constraints with predicted probability > eps.
    pub violations: Vec<ForbiddenOutcomeViolation>,
}

/// Compares the model's predictions against the quantum Born table at
/// tolerance `eps` and lists every forbidden-outcome constraint the model
/// breaks by more than `eps`.
///
/// This is the executable form of the no-go theorem: any model with
/// positive overlap mass q on all parties must fail for every
/// eps < q³/outcome_count.
pub fn consistency_check(
    model: &OnticModel,
    family: &PreparationFamily,
    basis: &MeasurementBasis,
    eps: f64,
) -> Result<ConsistencyReport> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            message: format!("tolerance eps = {eps} must be positive"),
        });
    }
    let quantum = probability_table(family, basis)?;
    if model.preparation_count() != quantum.len() || model.outcome_count() != basis.len() {
        return Err(Error::DimensionMismatch {
            left: model.preparation_count(),
            right: quantum.len(),
        });
    }
    let (matching, _) = find_exclusion_matching(family, basis)?;
    let mut max_deviation: f64 = 0.0;
    let mut violations = Vec::new();
    for preparation in 1..=model.preparation_count() {
        let predicted = model.prediction(preparation)?;
        for (&p, &born) in predicted.iter().zip(&quantum[preparation - 1]) {
            max_deviation = max_deviation.max((p - born).abs());
        }
        let forbidden = matching.outcome_excluding(preparation - 1)?;
        if predicted[forbidden] > eps {
            violations.push(ForbiddenOutcomeViolation {
                preparation,
                outcome: forbidden + 1,
                predicted: predicted[forbidden],
            });
        }
    }
    Ok(ConsistencyReport {
        max_deviation,
        eps,
        passes: max_deviation <= eps,
        violations,
    })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Renders a model as a report document: parties with their point labels
/// and epistemic map (state label → probability array), the dense response
/// table indexed by joint point, and the outcome count.
pub fn model_to_node(model: &OnticModel) -> Node {
    let parties = model
        .parties()
        .iter()
        .map(|party| {
            let epistemic = Node::Obj(
                party
                    .state_labels()
                    .iter()
                    .zip(party.distributions())
                    .map(|(label, dist)| (label.clone(), Node::float_array(dist)))
                    .collect(),
            );
            Node::Obj(vec![
                ("name".into(), Node::str(party.name())),
                (
                    "points".into(),
                    Node::Arr(party.points().iter().map(Node::str).collect()),
                ),
                ("epistemic".into(), epistemic),
            ])
        })
        .collect();
    Node::Obj(vec![
        ("parties".into(), Node::Arr(parties)),
        ("response".into(), Node::float_matrix(model.response())),
        ("outcome_count".into(), Node::Int(model.outcome_count() as i64)),
    ])
}

fn field<'a>(node: &'a Node, key: &str) -> Result<&'a Node> {
    node.get(key)
        .ok_or_else(|| Error::Parse(format!("model document is missing '{key}'")))
}

fn float_vec(node: &Node, context: &str) -> Result<Vec<f64>> {
    node.as_arr()
        .ok_or_else(|| Error::Parse(format!("{context} must be an array")))?
        .iter()
        .map(|item| {
            item.as_f64()
                .ok_or_else(|| Error::Parse(format!("{context} must contain numbers")))
        })
        .collect()
}

/// Reconstructs a model from its report document, revalidating everything.
pub fn model_from_node(node: &Node) -> Result<OnticModel> {
    let parties_node = field(node, "parties")?
        .as_arr()
        .ok_or_else(|| Error::Parse("'parties' must be an array".to_string()))?;
    let mut parties = Vec::with_capacity(parties_node.len());
    for entry in parties_node {
        let name = field(entry, "name")?
            .as_str()
            .ok_or_else(|| Error::Parse("party 'name' must be a string".to_string()))?;
        let points = field(entry, "points")?
            .as_arr()
            .ok_or_else(|| Error::Parse("party 'points' must be an array".to_string()))?
            .iter()
            .map(|p| {
                p.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("point labels must be strings".to_string()))
            })
            .collect::<Result<Vec<String>>>()?;
        let epistemic = match field(entry, "epistemic")? {
            Node::Obj(fields) => fields,
            _ => return Err(Error::Parse("'epistemic' must be an object".to_string())),
        };
        if epistemic.len() != 2 {
            return Err(Error::Parse(format!(
                "party '{name}' must carry exactly two epistemic states, found {}",
                epistemic.len()
            )));
        }
        let labels = [epistemic[0].0.clone(), epistemic[1].0.clone()];
        let distributions = [
            float_vec(&epistemic[0].1, "epistemic distribution")?,
            float_vec(&epistemic[1].1, "epistemic distribution")?,
        ];
        parties.push(OnticParty::new(name, points, labels, distributions)?);
    }
    let response = field(node, "response")?
        .as_arr()
        .ok_or_else(|| Error::Parse("'response' must be an array".to_string()))?
        .iter()
        .map(|row| float_vec(row, "response row"))
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let outcome_count = field(node, "outcome_count")?
        .as_i64()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse("'outcome_count' must be a positive integer".to_string()))?;
    OnticModel::new(parties, response, outcome_count as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exclusion::{build_preparations, exclusion_basis};
    use crate::report::parse_json;
    use std::f64::consts::FRAC_PI_3;

    fn protocol() -> (PreparationFamily, MeasurementBasis) {
        (build_preparations(FRAC_PI_3).unwrap(), exclusion_basis())
    }

    #[test]
    fn psi_ontic_model_reproduces_the_born_table() {
        let (family, basis) = protocol();
        let model = build_psi_ontic_model(&family, &basis).unwrap();
        let table = probability_table(&family, &basis).unwrap();
        for prep in 1..=8 {
            let predicted = model.prediction(prep).unwrap();
            for (p, born) in predicted.iter().zip(&table[prep - 1]) {
                assert!((p - born).abs() <= 1e-15);
            }
        }
        for party in model.parties() {
            assert_eq!(party.overlap_mass(), 0.0);
            assert!(party.overlap_region().is_empty());
        }
        assert_eq!(model.joint_overlap_mass(), 0.0);
    }

    #[test]
    fn prediction_matches_independent_triple_loop() {
        let (family, basis) = protocol();
        let psi_ontic = build_psi_ontic_model(&family, &basis).unwrap();
        // Non-uniform response to make the comparison meaningful.
        let rows: Vec<Vec<f64>> = (0..27)
            .map(|j| {
                let mut row: Vec<f64> = (0..8).map(|k| ((j * 8 + k) % 5 + 1) as f64).collect();
                let total: f64 = row.iter().sum();
                row.iter_mut().for_each(|x| *x /= total);
                row
            })
            .collect();
        let toy = build_overlap_toy_model(0.3).unwrap().with_response(rows).unwrap();

        for model in [&psi_ontic, &toy] {
            for prep in 1..=8usize {
                let expected = {
                    let bits = prep - 1;
                    let dist = |p: usize| {
                        let n = model.parties().len();
                        let sel = (bits >> (n - 1 - p)) & 1;
                        &model.parties()[p].distributions()[sel]
                    };
                    let (da, db, dc) = (dist(0), dist(1), dist(2));
                    let (nb, nc) = (db.len(), dc.len());
                    let mut acc = vec![0.0; model.outcome_count()];
                    for (ia, &wa) in da.iter().enumerate() {
                        for (ib, &wb) in db.iter().enumerate() {
                            for (ic, &wc) in dc.iter().enumerate() {
                                let joint = (ia * nb + ib) * nc + ic;
                                let w = wa * wb * wc;
                                for (slot, &r) in
                                    acc.iter_mut().zip(&model.response()[joint])
                                {
                                    *slot += w * r;
                                }
                            }
                        }
                    }
                    acc
                };
                let got = model.prediction(prep).unwrap();
                for (x, y) in got.iter().zip(&expected) {
                    assert!((x - y).abs() <= 1e-12);
                }
                let sum: f64 = got.iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn prediction_rejects_bad_indices() {
        let (family, basis) = protocol();
        let model = build_psi_ontic_model(&family, &basis).unwrap();
        assert!(model.prediction(0).is_err());
        assert!(model.prediction(9).is_err());
        assert!(model.prediction(8).is_ok());
    }

    #[test]
    fn deterministic_single_point_model() {
        let point = |label: &str| {
            OnticParty::new(
                label,
                vec!["sole".to_string()],
                ["first".to_string(), "second".to_string()],
                [vec![1.0], vec![1.0]],
            )
            .unwrap()
        };
        let mut row = vec![0.0; 8];
        row[2] = 1.0;
        let model = OnticModel::new(
            vec![point("A"), point("B"), point("C")],
            vec![row.clone()],
            8,
        )
        .unwrap();
        for prep in 1..=8 {
            assert_eq!(model.prediction(prep).unwrap(), row);
        }
    }

    #[test]
    fn toy_model_shapes_and_bounds() {
        let full = build_overlap_toy_model(1.0).unwrap();
        for prep in 1..=8 {
            for p in full.prediction(prep).unwrap() {
                assert!((p - 0.125).abs() <= 1e-15);
            }
        }
        for party in full.parties() {
            assert_eq!(party.overlap_mass(), 1.0);
            assert_eq!(party.overlap_region(), vec![1]);
        }

        let half = build_overlap_toy_model(0.5).unwrap();
        assert!((half.joint_overlap_mass() - 0.125).abs() <= 1e-15);

        for bad in [0.0, -0.1, 1.2, f64::NAN] {
            assert!(build_overlap_toy_model(bad).is_err(), "q = {bad}");
        }
    }

    #[test]
    fn forbidden_outcome_bound_examples() {
        let (family, basis) = protocol();
        let (matching, _) = find_exclusion_matching(&family, &basis).unwrap();

        let psi_ontic = build_psi_ontic_model(&family, &basis).unwrap();
        assert!(forbidden_outcome_bound(&psi_ontic, &matching).unwrap() <= 1e-24);

        let half = build_overlap_toy_model(0.5).unwrap();
        let bound = forbidden_outcome_bound(&half, &matching).unwrap();
        assert!((bound - 0.125).abs() <= 1e-15); // uniform response: exactly 1/8
        assert!(bound >= 1.0 / 64.0 - 1e-12); // the q^3/8 pigeonhole floor at q = 1/2

        let full = build_overlap_toy_model(1.0).unwrap();
        assert!(forbidden_outcome_bound(&full, &matching).unwrap() >= 0.125 - 1e-15);
    }

    #[test]
    fn pigeonhole_bound_holds_for_random_response_tables() {
        let (family, basis) = protocol();
        let (matching, _) = find_exclusion_matching(&family, &basis).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for &q in &[0.25, 0.7] {
            let template = build_overlap_toy_model(q).unwrap();
            for _ in 0..20 {
                let rows: Vec<Vec<f64>> = (0..template.joint_point_count())
                    .map(|_| {
                        let mut row: Vec<f64> =
                            (0..8).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                        let total: f64 = row.iter().sum();
                        row.iter_mut().for_each(|x| *x /= total);
                        row
                    })
                    .collect();
                let model = template.clone().with_response(rows).unwrap();
                let bound = forbidden_outcome_bound(&model, &matching).unwrap();
                assert!(
                    bound >= q.powi(3) / 8.0 - 1e-12,
                    "bound {bound:.6e} below q^3/8 = {:.6e} at q = {q}",
                    q.powi(3) / 8.0
                );
            }
        }
    }

    #[test]
    fn consistency_check_examples() {
        let (family, basis) = protocol();

        let psi_ontic = build_psi_ontic_model(&family, &basis).unwrap();
        let report = consistency_check(&psi_ontic, &family, &basis, 1e-9).unwrap();
        assert!(report.passes);
        assert!(report.max_deviation <= 1e-12);
        assert!(report.violations.is_empty());

        let half = build_overlap_toy_model(0.5).unwrap();
        let strict = consistency_check(&half, &family, &basis, 1e-3).unwrap();
        assert!(!strict.passes);
        assert!(!strict.violations.is_empty());
        for violation in &strict.violations {
            assert!(violation.predicted >= 1.0 / 64.0 - 1e-12);
        }

        // Loose tolerance: the uniform model sits within 0.5 of every Born
        // entry, and its 1/8 forbidden predictions stay below eps.
        let loose = consistency_check(&half, &family, &basis, 0.5).unwrap();
        assert!(loose.passes);
        assert!(loose.max_deviation > 0.3); // honest deviation, just tolerated
        assert!(loose.violations.is_empty());

        assert!(consistency_check(&half, &family, &basis, 0.0).is_err());
        assert!(consistency_check(&half, &family, &basis, -1.0).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic_and_converges() {
        let (family, basis) = protocol();
        let (matching, _) = find_exclusion_matching(&family, &basis).unwrap();

        let psi_ontic = build_psi_ontic_model(&family, &basis).unwrap();
        let first = psi_ontic.monte_carlo_run(1, 100_000, 0).unwrap();
        let second = psi_ontic.monte_carlo_run(1, 100_000, 0).unwrap();
        assert_eq!(first, second);
        let forbidden = matching.outcome_excluding(0).unwrap();
        assert_eq!(first[forbidden], 0.0); // zero-probability event never fires

        let half = build_overlap_toy_model(0.5).unwrap();
        for prep in [1usize, 5] {
            let freq = half.monte_carlo_run(prep, 100_000, 0).unwrap();
            let exact = half.prediction(prep).unwrap();
            let forbidden = matching.outcome_excluding(prep - 1).unwrap();
            let p = exact[forbidden];
            let tolerance = 5.0 * (p * (1.0 - p) / 100_000.0).sqrt();
            assert!(
                (freq[forbidden] - p).abs() <= tolerance,
                "frequency {:.6} vs exact {:.6} beyond 5 sigma",
                freq[forbidden],
                p
            );
            let total: f64 = freq.iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
        }

        let different_seed = half.monte_carlo_run(1, 10_000, 1).unwrap();
        let base = half.monte_carlo_run(1, 10_000, 0).unwrap();
        assert_ne!(different_seed, base);

        assert!(half.monte_carlo_run(1, 0, 0).is_err());
    }

    #[test]
    fn model_document_round_trips() {
        let (family, basis) = protocol();
        for model in [
            build_psi_ontic_model(&family, &basis).unwrap(),
            build_overlap_toy_model(0.5).unwrap(),
        ] {
            let node = model_to_node(&model);
            let text = node.to_json().unwrap();
            let reparsed = parse_json(&text).unwrap();
            assert_eq!(reparsed, node);
            let rebuilt = model_from_node(&reparsed).unwrap();
            assert_eq!(rebuilt, model);
        }
    }

    #[test]
    fn malformed_model_documents_are_rejected() {
        let (family, basis) = protocol();
        let model = build_overlap_toy_model(0.5).unwrap();
        let node = model_to_node(&model);

        // Drop a required field.
        if let Node::Obj(fields) = &node {
            let missing = Node::Obj(fields[1..].to_vec());
            assert!(model_from_node(&missing).is_err());
        } else {
            panic!("model document must be an object");
        }

        // Corrupt a response row so it no longer normalizes.
        let mut bad_response = model.response().to_vec();
        bad_response[0][0] += 0.5;
        assert!(model.clone().with_response(bad_response).is_err());

        // Distribution that does not sum to one.
        let bad_party = OnticParty::new(
            "A",
            vec!["x".to_string(), "y".to_string()],
            ["s".to_string(), "t".to_string()],
            [vec![0.6, 0.6], vec![1.0, 0.0]],
        );
        assert!(matches!(bad_party, Err(Error::NotNormalized { .. })));

        let negative = OnticParty::new(
            "A",
            vec!["x".to_string(), "y".to_string()],
            ["s".to_string(), "t".to_string()],
            [vec![1.5, -0.5], vec![1.0, 0.0]],
        );
        assert!(negative.is_err());

        let _ = (family, basis);
    }
}
