//! Interference-based binary classifiers over amplitude-encoded samples.
//!
//! Register layout (qubit 0 leftmost): ancilla, then the index qubit for
//! 2-prototype variants, then the data qubits, then the class qubit for the
//! Hadamard classifier. All circuits load the test sample on the ancilla-1
//! branch, flip the ancilla so the test ends up on |0>, load the stored
//! prototype(s) on the ancilla-1 branch, and close with a Hadamard on the
//! ancilla so the branches interfere. The probability of reading the ancilla
//! as |0> is then (1/4M) * sum_m ||test + prototype_m||^2, the degree of
//! membership of the test sample in the stored set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{angles_from_vector, loader_circuit, AngleTree, EncodingError, LoaderSpec};
use crate::sim::{Circuit, GateKind, GateOp, SimError};

/// Required closeness of a sample's norm to 1.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("sample norm {0} is not 1 within {UNIT_TOLERANCE}")]
    NotUnit(f64),
    #[error("cannot normalize a zero feature vector")]
    ZeroVector,
    #[error("feature count {0} is not a power of two of at least 2")]
    BadFeatureCount(usize),
    #[error("test sample has {test} features but prototypes have {prototype}")]
    FeatureLengthMismatch { test: usize, prototype: usize },
    #[error("expected a {expected} model, got {got}")]
    WrongModelKind { expected: &'static str, got: ClassifierKind },
    #[error("one-class prototypes must share a label, got {0} and {1}")]
    PrototypeLabelMismatch(usize, usize),
    #[error("hadamard-classifier prototypes must have distinct labels, both are {0}")]
    PrototypeLabelsEqual(usize),
    #[error("postselection failed: no probability mass on ancilla = 0")]
    PostselectionFailure,
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Which circuit family a trained model drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    /// Two cross-class prototypes, class qubit, postselected readout.
    Hc,
    /// Two same-class prototypes, ancilla readout only.
    Qocc2,
    /// Single prototype, ancilla readout only.
    Qocc1,
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifierKind::Hc => write!(f, "hc"),
            ClassifierKind::Qocc2 => write!(f, "qocc2"),
            ClassifierKind::Qocc1 => write!(f, "qocc1"),
        }
    }
}

/// A standardized, unit-norm feature vector with its class label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreparedSample {
    features: Vec<f64>,
    label: usize,
}

impl PreparedSample {
    pub fn new(features: Vec<f64>, label: usize) -> Result<Self, ClassifierError> {
        let len = features.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(ClassifierError::BadFeatureCount(len));
        }
        let norm = features.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(ClassifierError::NotUnit(norm));
        }
        Ok(Self { features, label })
    }

    /// Scales `features` to unit norm first; errors on a zero vector.
    pub fn from_unnormalized(features: Vec<f64>, label: usize) -> Result<Self, ClassifierError> {
        let len = features.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(ClassifierError::BadFeatureCount(len));
        }
        let norm = features.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(ClassifierError::ZeroVector);
        }
        Self::new(features.iter().map(|x| x / norm).collect(), label)
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn label(&self) -> usize {
        self.label
    }
}

/// A classifier with its chosen prototype(s) and cached loader angles.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    kind: ClassifierKind,
    prototypes: Vec<PreparedSample>,
    angle_trees: Vec<AngleTree>,
}

impl TrainedModel {
    pub fn qocc1(prototype: PreparedSample) -> Result<Self, ClassifierError> {
        let tree = angles_from_vector(prototype.features())?;
        Ok(Self { kind: ClassifierKind::Qocc1, prototypes: vec![prototype], angle_trees: vec![tree] })
    }

    pub fn qocc2(first: PreparedSample, second: PreparedSample) -> Result<Self, ClassifierError> {
        if first.label() != second.label() {
            return Err(ClassifierError::PrototypeLabelMismatch(first.label(), second.label()));
        }
        Self::two_prototype(ClassifierKind::Qocc2, first, second)
    }

    /// Prototypes are stored sorted by label so that class-qubit outcome 0
    /// always maps to the lower label.
    pub fn hc(first: PreparedSample, second: PreparedSample) -> Result<Self, ClassifierError> {
        if first.label() == second.label() {
            return Err(ClassifierError::PrototypeLabelsEqual(first.label()));
        }
        let (lo, hi) = if first.label() < second.label() { (first, second) } else { (second, first) };
        Self::two_prototype(ClassifierKind::Hc, lo, hi)
    }

    fn two_prototype(
        kind: ClassifierKind,
        first: PreparedSample,
        second: PreparedSample,
    ) -> Result<Self, ClassifierError> {
        if first.features().len() != second.features().len() {
            return Err(ClassifierError::FeatureLengthMismatch {
                test: first.features().len(),
                prototype: second.features().len(),
            });
        }
        let trees = vec![
            angles_from_vector(first.features())?,
            angles_from_vector(second.features())?,
        ];
        Ok(Self { kind, prototypes: vec![first, second], angle_trees: trees })
    }

    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn prototypes(&self) -> &[PreparedSample] {
        &self.prototypes
    }

    /// The single class a one-class model stores.
    pub fn stored_class(&self) -> usize {
        self.prototypes[0].label()
    }

    /// The (lower, higher) label pair of a Hadamard-classifier model.
    pub fn class_pair(&self) -> (usize, usize) {
        (self.prototypes[0].label(), self.prototypes[1].label())
    }

    fn feature_len(&self) -> usize {
        self.prototypes[0].features().len()
    }

    fn check_test(&self, test: &PreparedSample) -> Result<(), ClassifierError> {
        if test.features().len() != self.feature_len() {
            return Err(ClassifierError::FeatureLengthMismatch {
                test: test.features().len(),
                prototype: self.feature_len(),
            });
        }
        Ok(())
    }
}

/// Exact readout or seeded finite-shot sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

/// Probability of measuring the ancilla as |0>; clamped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipScore(f64);

impl MembershipScore {
    pub fn new(value: f64) -> Self {
        Self(value.clamp(0.0, 1.0))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

fn loader(tree: &AngleTree, data_qubits: &[usize], extra: &[(usize, bool)]) -> Vec<GateOp> {
    let spec = LoaderSpec {
        data_qubits: data_qubits.to_vec(),
        extra_controls: extra.to_vec(),
        angle_tree: tree.clone(),
    };
    loader_circuit(&spec).expect("classifier register layout has no qubit collisions")
}

/// Builds the one-class circuit for `test` against a QOCC model.
///
/// Two prototypes: H on ancilla and index, test load controlled on the
/// ancilla, X on the ancilla, first prototype load controlled on ancilla and
/// index, X on the index, second prototype load, closing H on the ancilla.
/// One prototype: the same with the index register removed.
pub fn build_qocc_circuit(
    test: &PreparedSample,
    model: &TrainedModel,
) -> Result<Circuit, ClassifierError> {
    model.check_test(test)?;
    let test_tree = angles_from_vector(test.features())?;
    let data_count = test.features().len().trailing_zeros() as usize;
    match model.kind() {
        ClassifierKind::Qocc1 => {
            let data: Vec<usize> = (1..1 + data_count).collect();
            let mut circuit = Circuit::new(1 + data_count)?;
            circuit.push(GateOp::h(0))?;
            circuit.extend(loader(&test_tree, &data, &[(0, true)]))?;
            circuit.push(GateOp::x(0))?;
            circuit.extend(loader(&model.angle_trees[0], &data, &[(0, true)]))?;
            circuit.push(GateOp::h(0))?;
            Ok(circuit)
        }
        ClassifierKind::Qocc2 => {
            let data: Vec<usize> = (2..2 + data_count).collect();
            let mut circuit = Circuit::new(2 + data_count)?;
            push_two_prototype_loads(&mut circuit, model, &test_tree, &data)?;
            circuit.push(GateOp::h(0))?;
            Ok(circuit)
        }
        other => Err(ClassifierError::WrongModelKind { expected: "one-class", got: other }),
    }
}

/// Builds the Hadamard-classifier circuit: the 2-prototype construction plus
/// a class qubit entangled with the index qubit by a CNOT, so index m
/// carries the label of prototype m.
pub fn build_hc_circuit(
    test: &PreparedSample,
    model: &TrainedModel,
) -> Result<Circuit, ClassifierError> {
    if model.kind() != ClassifierKind::Hc {
        return Err(ClassifierError::WrongModelKind { expected: "hc", got: model.kind() });
    }
    model.check_test(test)?;
    let test_tree = angles_from_vector(test.features())?;
    let data_count = test.features().len().trailing_zeros() as usize;
    let data: Vec<usize> = (2..2 + data_count).collect();
    let class_qubit = 2 + data_count;
    let mut circuit = Circuit::new(3 + data_count)?;
    push_two_prototype_loads(&mut circuit, model, &test_tree, &data)?;
    circuit.push(GateOp::new(GateKind::X, class_qubit, &[1])?)?;
    circuit.push(GateOp::h(0))?;
    Ok(circuit)
}

fn push_two_prototype_loads(
    circuit: &mut Circuit,
    model: &TrainedModel,
    test_tree: &AngleTree,
    data: &[usize],
) -> Result<(), ClassifierError> {
    circuit.push(GateOp::h(0))?;
    circuit.push(GateOp::h(1))?;
    circuit.extend(loader(test_tree, data, &[(0, true)]))?;
    circuit.push(GateOp::x(0))?;
    circuit.extend(loader(&model.angle_trees[0], data, &[(0, true), (1, true)]))?;
    circuit.push(GateOp::x(1))?;
    circuit.extend(loader(&model.angle_trees[1], data, &[(0, true), (1, true)]))?;
    Ok(())
}

/// Degree of membership of `test` in the model's stored set: the probability
/// of reading the ancilla as |0>, exactly or from sampled shots.
pub fn membership_score(
    test: &PreparedSample,
    model: &TrainedModel,
    mode: ScoreMode,
) -> Result<MembershipScore, ClassifierError> {
    let circuit = build_qocc_circuit(test, model)?;
    let state = circuit.simulate()?;
    let value = match mode {
        ScoreMode::Exact => state.marginal_probability(0)?.0,
        ScoreMode::Shots { shots, seed } => {
            let counts = state.sample_counts(&[0], shots, seed)?;
            counts.get("0").copied().unwrap_or(0) as f64 / shots as f64
        }
    };
    Ok(MembershipScore::new(value))
}

/// Closed-form membership (1/4M) * sum_m ||test + prototype_m||^2; the
/// independent oracle for `membership_score`.
pub fn closed_form_membership<P: AsRef<[f64]>>(test: &[f64], prototypes: &[P]) -> f64 {
    let m = prototypes.len();
    debug_assert!(m > 0);
    let sum: f64 = prototypes
        .iter()
        .map(|p| {
            test.iter()
                .zip(p.as_ref())
                .map(|(t, x)| (t + x) * (t + x))
                .sum::<f64>()
        })
        .sum();
    sum / (4.0 * m as f64)
}

/// Membership above 1/2 claims the stored class; everything else, including
/// an exact tie, goes to the other class.
pub fn qocc_decide(score: MembershipScore, stored_class: usize, other_class: usize) -> usize {
    if score.value() > 0.5 {
        stored_class
    } else {
        other_class
    }
}

/// Postselected readout of one Hadamard-classifier run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HcOutcome {
    /// Distribution of the class qubit given ancilla = 0, ordered
    /// (lower label, higher label). Shot mode reports the surviving-shot
    /// frequencies.
    pub class_distribution: (f64, f64),
    /// Exact probability that postselection succeeds, from the statevector.
    pub postselection_probability: f64,
    /// Shot mode only: (kept ancilla-0 shots, discarded ancilla-1 shots).
    pub shot_split: Option<(u64, u64)>,
    pub predicted: usize,
}

/// Classifies `test` with a Hadamard-classifier model.
///
/// Exact mode conditions the class qubit on ancilla = 0. Shot mode samples
/// (ancilla, class) jointly, discards ancilla-1 shots, and takes a majority
/// vote over the survivors. Zero surviving probability or zero surviving
/// shots is a postselection failure. A 50/50 readout predicts the higher
/// label, mirroring the one-class tie rule.
pub fn hc_classify(
    test: &PreparedSample,
    model: &TrainedModel,
    mode: ScoreMode,
) -> Result<HcOutcome, ClassifierError> {
    let circuit = build_hc_circuit(test, model)?;
    let state = circuit.simulate()?;
    let postselection_probability = state.marginal_probability(0)?.0;
    let class_qubit = circuit.num_qubits() - 1;
    let labels = model.class_pair();
    match mode {
        ScoreMode::Exact => {
            let (p_lo, p_hi) = state
                .conditional_distribution(0, false, class_qubit)
                .map_err(|e| match e {
                    SimError::DegenerateCondition { .. } => ClassifierError::PostselectionFailure,
                    other => ClassifierError::Sim(other),
                })?;
            let predicted = if p_lo > p_hi { labels.0 } else { labels.1 };
            Ok(HcOutcome {
                class_distribution: (p_lo, p_hi),
                postselection_probability,
                shot_split: None,
                predicted,
            })
        }
        ScoreMode::Shots { shots, seed } => {
            let counts = state.sample_counts(&[0, class_qubit], shots, seed)?;
            let kept_lo = counts.get("00").copied().unwrap_or(0);
            let kept_hi = counts.get("01").copied().unwrap_or(0);
            let kept = kept_lo + kept_hi;
            if kept == 0 {
                return Err(ClassifierError::PostselectionFailure);
            }
            let predicted = if kept_lo > kept_hi { labels.0 } else { labels.1 };
            Ok(HcOutcome {
                class_distribution: (kept_lo as f64 / kept as f64, kept_hi as f64 / kept as f64),
                postselection_probability,
                shot_split: Some((kept, shots - kept)),
                predicted,
            })
        }
    }
}

/// The class id alone; see `hc_classify` for the full readout.
pub fn hc_decide(
    test: &PreparedSample,
    model: &TrainedModel,
    mode: ScoreMode,
) -> Result<usize, ClassifierError> {
    Ok(hc_classify(test, model, mode)?.predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-10;

    fn sample(v: &[f64], label: usize) -> PreparedSample {
        PreparedSample::new(v.to_vec(), label).unwrap()
    }

    fn unit(theta: f64) -> Vec<f64> {
        vec![theta.cos(), theta.sin()]
    }

    #[test]
    fn prepared_sample_validation() {
        assert!(matches!(
            PreparedSample::new(vec![0.5, 0.5], 0),
            Err(ClassifierError::NotUnit(_))
        ));
        assert!(matches!(
            PreparedSample::new(vec![1.0, 0.0, 0.0], 0),
            Err(ClassifierError::BadFeatureCount(3))
        ));
        assert!(matches!(
            PreparedSample::from_unnormalized(vec![0.0, 0.0], 0),
            Err(ClassifierError::ZeroVector)
        ));
        let s = PreparedSample::from_unnormalized(vec![3.0, 4.0], 1).unwrap();
        assert!((s.features()[0] - 0.6).abs() < EPS);
        assert!((s.features()[1] - 0.8).abs() < EPS);
    }

    #[test]
    fn model_label_rules() {
        let a = sample(&[1.0, 0.0], 0);
        let b = sample(&[0.0, 1.0], 1);
        assert!(matches!(
            TrainedModel::qocc2(a.clone(), b.clone()),
            Err(ClassifierError::PrototypeLabelMismatch(0, 1))
        ));
        assert!(matches!(
            TrainedModel::hc(a.clone(), a.clone()),
            Err(ClassifierError::PrototypeLabelsEqual(0))
        ));
        // HC prototypes are reordered so the lower label comes first.
        let model = TrainedModel::hc(b.clone(), a.clone()).unwrap();
        assert_eq!(model.class_pair(), (0, 1));
        assert_eq!(model.prototypes()[0].features(), a.features());
    }

    #[test]
    fn qocc1_membership_trivial_cases() {
        let proto = sample(&[1.0, 0.0], 0);
        let model = TrainedModel::qocc1(proto.clone()).unwrap();

        let same = membership_score(&proto, &model, ScoreMode::Exact).unwrap();
        assert!((same.value() - 1.0).abs() < EPS);

        let orthogonal = sample(&[0.0, 1.0], 0);
        let s = membership_score(&orthogonal, &model, ScoreMode::Exact).unwrap();
        assert!((s.value() - 0.5).abs() < EPS);

        let antipodal = sample(&[-1.0, 0.0], 0);
        let s = membership_score(&antipodal, &model, ScoreMode::Exact).unwrap();
        assert!(s.value() < EPS);
    }

    #[test]
    fn qocc2_membership_examples() {
        let test = sample(&unit(0.3), 0);
        let model = TrainedModel::qocc2(test.clone(), test.clone()).unwrap();
        let s = membership_score(&test, &model, ScoreMode::Exact).unwrap();
        assert!((s.value() - 1.0).abs() < EPS);

        // One prototype equal to the test, the other orthogonal: (1/8)(4+2).
        let other = sample(&unit(0.3 + std::f64::consts::FRAC_PI_2), 0);
        let model = TrainedModel::qocc2(test.clone(), other).unwrap();
        let s = membership_score(&test, &model, ScoreMode::Exact).unwrap();
        assert!((s.value() - 0.75).abs() < EPS);
    }

    #[test]
    fn membership_matches_inner_product_form() {
        // For unit vectors, (1/4)||t + p||^2 = (1 + <t, p>)/2.
        let pairs = [(0.1, 0.9), (1.2, -0.4), (2.5, 2.6), (-1.0, 2.9)];
        for (a, b) in pairs {
            let test = sample(&unit(a), 0);
            let proto = sample(&unit(b), 0);
            let model = TrainedModel::qocc1(proto.clone()).unwrap();
            let s = membership_score(&test, &model, ScoreMode::Exact).unwrap();
            let inner: f64 = test
                .features()
                .iter()
                .zip(proto.features())
                .map(|(x, y)| x * y)
                .sum();
            assert!((s.value() - (1.0 + inner) / 2.0).abs() < EPS);
            let oracle = closed_form_membership(test.features(), &[proto.features()]);
            assert!((s.value() - oracle).abs() < EPS);
        }
    }

    #[test]
    fn closed_form_examples() {
        let x = [1.0, 0.0];
        let y = [0.0, 1.0];
        assert!((closed_form_membership(&x, &[x]) - 1.0).abs() < EPS);
        assert!((closed_form_membership(&x, &[y]) - 0.5).abs() < EPS);
        assert!((closed_form_membership(&x, &[x, y]) - 0.75).abs() < EPS);
    }

    #[test]
    fn qocc2_circuit_gate_sequence_for_two_features() {
        let test = sample(&unit(0.4), 1);
        let p0 = sample(&unit(1.0), 1);
        let p1 = sample(&unit(2.0), 1);
        let model = TrainedModel::qocc2(p0, p1).unwrap();
        let circuit = build_qocc_circuit(&test, &model).unwrap();
        assert_eq!(circuit.num_qubits(), 3);
        let ops = circuit.ops();
        assert_eq!(ops.len(), 8);
        assert_eq!(ops[0], GateOp::h(0));
        assert_eq!(ops[1], GateOp::h(1));
        assert!(matches!(ops[2].kind, GateKind::Ry(_)));
        assert_eq!((ops[2].target, ops[2].controls.as_slice()), (2, &[0][..]));
        assert_eq!(ops[3], GateOp::x(0));
        assert!(matches!(ops[4].kind, GateKind::Ry(_)));
        assert_eq!((ops[4].target, ops[4].controls.as_slice()), (2, &[0, 1][..]));
        assert_eq!(ops[5], GateOp::x(1));
        assert!(matches!(ops[6].kind, GateKind::Ry(_)));
        assert_eq!((ops[6].target, ops[6].controls.as_slice()), (2, &[0, 1][..]));
        assert_eq!(ops[7], GateOp::h(0));
    }

    #[test]
    fn wrong_model_kind_is_rejected() {
        let a = sample(&[1.0, 0.0], 0);
        let b = sample(&[0.0, 1.0], 1);
        let hc = TrainedModel::hc(a.clone(), b.clone()).unwrap();
        assert!(matches!(
            build_qocc_circuit(&a, &hc),
            Err(ClassifierError::WrongModelKind { .. })
        ));
        let qocc = TrainedModel::qocc1(a.clone()).unwrap();
        assert!(matches!(
            build_hc_circuit(&a, &qocc),
            Err(ClassifierError::WrongModelKind { .. })
        ));
        assert!(matches!(
            membership_score(&a, &hc, ScoreMode::Exact),
            Err(ClassifierError::WrongModelKind { .. })
        ));
    }

    #[test]
    fn hc_conditional_distribution_for_orthogonal_prototypes() {
        // Test equals the class-0 prototype; prototypes orthogonal. The
        // ancilla-0 branch holds (2/3, 1/3) over the class qubit.
        let p0 = sample(&[1.0, 0.0], 0);
        let p1 = sample(&[0.0, 1.0], 1);
        let model = TrainedModel::hc(p0.clone(), p1).unwrap();
        let outcome = hc_classify(&p0, &model, ScoreMode::Exact).unwrap();
        assert!((outcome.class_distribution.0 - 2.0 / 3.0).abs() < EPS);
        assert!((outcome.class_distribution.1 - 1.0 / 3.0).abs() < EPS);
        assert_eq!(outcome.predicted, 0);
        // Postselection probability (1/8)(||t+p0||^2 + ||t+p1||^2) = 0.75.
        assert!((outcome.postselection_probability - 0.75).abs() < EPS);
    }

    #[test]
    fn hc_equidistant_test_ties_to_higher_label() {
        // Prototypes mirrored about the test vector produce bit-identical
        // branch weights, so the readout is an exact 50/50 tie.
        let p0 = sample(&[0.8f64.cos(), 0.8f64.sin()], 0);
        let p1 = sample(&[0.8f64.cos(), -(0.8f64.sin())], 1);
        let test = sample(&[1.0, 0.0], 0);
        let model = TrainedModel::hc(p0, p1).unwrap();
        let outcome = hc_classify(&test, &model, ScoreMode::Exact).unwrap();
        assert_eq!(outcome.class_distribution.0, 0.5);
        assert_eq!(outcome.predicted, 1);
    }

    #[test]
    fn hc_postselection_failure_on_antipodal_prototypes() {
        // Prototypes antipodal to the test leave only rounding residue
        // (~1e-33) on ancilla 0, so finite shots never survive selection.
        let test = sample(&[1.0, 0.0], 0);
        let p0 = sample(&[-1.0, 0.0], 0);
        let p1 = sample(&[-1.0, 0.0], 1);
        let model = TrainedModel::hc(p0, p1).unwrap();
        assert!(matches!(
            hc_classify(&test, &model, ScoreMode::Shots { shots: 1024, seed: 17 }),
            Err(ClassifierError::PostselectionFailure)
        ));
        let exact = hc_classify(&test, &model, ScoreMode::Exact).unwrap();
        assert!(exact.postselection_probability < 1e-30);
    }

    #[test]
    fn hc_shot_mode_majority_vote() {
        let p0 = sample(&[1.0, 0.0], 0);
        let p1 = sample(&[0.0, 1.0], 1);
        let model = TrainedModel::hc(p0.clone(), p1).unwrap();
        let outcome =
            hc_classify(&p0, &model, ScoreMode::Shots { shots: 1024, seed: 11 }).unwrap();
        assert_eq!(outcome.predicted, 0);
        let (kept, dropped) = outcome.shot_split.unwrap();
        assert_eq!(kept + dropped, 1024);
        assert!(kept > 0);
        assert!((outcome.postselection_probability - 0.75).abs() < EPS);
    }

    #[test]
    fn qocc_decide_rules() {
        assert_eq!(qocc_decide(MembershipScore::new(0.9), 3, 7), 3);
        assert_eq!(qocc_decide(MembershipScore::new(0.1), 3, 7), 7);
        assert_eq!(qocc_decide(MembershipScore::new(0.5), 3, 7), 7);
    }

    #[test]
    fn shot_mode_score_is_consistent_with_exact() {
        let test = sample(&unit(0.2), 0);
        let proto = sample(&unit(0.9), 0);
        let model = TrainedModel::qocc1(proto).unwrap();
        let exact = membership_score(&test, &model, ScoreMode::Exact).unwrap();
        let shot = membership_score(&test, &model, ScoreMode::Shots { shots: 4096, seed: 5 })
            .unwrap();
        assert!((exact.value() - shot.value()).abs() < 0.05);
        let again = membership_score(&test, &model, ScoreMode::Shots { shots: 4096, seed: 5 })
            .unwrap();
        assert_eq!(shot.value(), again.value());
    }
}
