//! Exact statevector simulation plus interference-based binary classifiers
//! (Hadamard classifier and the one-class classifier in 1- and 2-prototype
//! variants), amplitude encoding, dataset preparation, and an experiment
//! harness that runs the full train/validate protocol.

pub mod classifier;
pub mod data;
pub mod encoding;
pub mod experiment;
pub mod sim;

pub use classifier::{
    build_hc_circuit, build_qocc_circuit, closed_form_membership, hc_classify, hc_decide,
    membership_score, qocc_decide, ClassifierError, ClassifierKind, HcOutcome, MembershipScore,
    PreparedSample, ScoreMode, TrainedModel,
};
pub use data::{
    load_dataset, make_batches, select_features_and_classes, smote_oversample,
    standardize_and_normalize, train_val_split, DataError, DatasetName, PreparedDataset, RawDataset,
    RawRow, ScalerStats, SplitSpec,
};
pub use encoding::{
    angles_from_vector, loader_circuit, two_feature_angle, AngleTree, EncodingError, LoaderSpec,
};
pub use experiment::{
    derive_seed, postselection_statistics, run_experiment, select_candidates, training_stage,
    validate_model, BatchSelection, Candidate, ExperimentConfig, ExperimentError,
    ExperimentOutcome, ExperimentReport, PostselectionSummary, ProtocolSettings, RunMode,
    SampleRecord, TrainingOutcome, ValidationOutcome,
};
pub use sim::{Circuit, GateKind, GateOp, SimError, StateVector};
