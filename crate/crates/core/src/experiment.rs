//! End-to-end experiment protocol: candidate prototype search on a training
//! split, exact-simulation model selection, validation in exact or shot
//! mode, and accuracy/postselection reporting.
//!
//! Pipeline order per batch: filter classes/features, oversample the
//! minority class in raw feature space, draw class-balanced batches, split
//! 70/30 stratified, fit the scaler on the training split only, transform
//! both splits, unit-normalize. The training stage always runs in exact
//! simulation; only validation honors the configured mode.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{
    hc_classify, membership_score, qocc_decide, ClassifierError, ClassifierKind, PreparedSample,
    ScoreMode, TrainedModel,
};
use crate::data::{
    load_dataset, make_batches, select_features_and_classes, smote_oversample,
    standardize_and_normalize, train_val_split, DataError, DatasetName, PreparedDataset, RawRow,
    ScalerStats, SplitSpec,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<ExperimentError>,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error("candidate count must be at least 1")]
    ZeroCandidateCount,
    #[error("no eligible candidates for stored class {0}")]
    NoEligibleCandidates(usize),
    #[error("no candidates to train on")]
    NoCandidates,
    #[error("stored class {class} is not one of the dataset classes {pair:?}")]
    StoredClassNotPresent { class: usize, pair: (usize, usize) },
    #[error("validation set is empty")]
    EmptyValidation,
    #[error("run count must be at least 1")]
    ZeroRuns,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("batch index {index} out of range, {count} batches exist")]
    BatchIndexOutOfRange { index: usize, count: usize },
    #[error("report is for a {0} model, not hc")]
    NotHcReport(ClassifierKind),
}

fn at_stage<T, E: Into<ExperimentError>>(
    stage: &'static str,
    result: Result<T, E>,
) -> Result<T, ExperimentError> {
    result.map_err(|e| ExperimentError::Stage { stage, source: Box::new(e.into()) })
}

// Tags for deriving sub-seeds from the configured base seeds.
const SEED_TAG_SMOTE: u64 = 1;
const SEED_TAG_BATCH: u64 = 2;
const SEED_TAG_CANDIDATE: u64 = 3;
const SEED_TAG_SHOT: u64 = 4;
const SEED_TAG_BATCH_SHOTS: u64 = 5;
const SEED_TAG_SAMPLE: u64 = 6;

/// Folds `tags` into `base` with a splitmix64 step per tag, giving every
/// pipeline stage and every (run, sample) pair its own reproducible stream.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut state = base;
    for &tag in tags {
        state = state
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(tag.wrapping_mul(0xBF58_476D_1CE4_E5B9));
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        state = z ^ (z >> 31);
    }
    state
}

/// Whether validation reads exact probabilities or sampled counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Exact,
    Shots,
}

impl std::fmt::Display for RunMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunMode::Exact => write!(f, "exact"),
            RunMode::Shots => write!(f, "shots"),
        }
    }
}

/// Run every batch or a single one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchSelection {
    All,
    Index(usize),
}

/// Everything a single experiment needs; echoed verbatim into reports.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetName,
    pub data_path: PathBuf,
    pub classifier: ClassifierKind,
    /// Class the one-class variants store (ignored by HC).
    pub stored_class: usize,
    pub candidate_count: usize,
    pub shots: u64,
    pub runs: usize,
    pub mode: RunMode,
    pub train_fraction: f64,
    pub split_seed: u64,
    pub candidate_seed: u64,
    pub shot_seed: u64,
    pub batch: BatchSelection,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetName, data_path: PathBuf, classifier: ClassifierKind) -> Self {
        Self {
            dataset,
            data_path,
            classifier,
            stored_class: 0,
            candidate_count: 30,
            shots: 1024,
            runs: 5,
            mode: RunMode::Exact,
            train_fraction: 0.7,
            split_seed: 7,
            candidate_seed: derive_seed(7, &[SEED_TAG_CANDIDATE]),
            shot_seed: derive_seed(7, &[SEED_TAG_SHOT]),
            batch: BatchSelection::All,
        }
    }

    /// Derives the candidate and shot seeds from one base seed.
    pub fn with_base_seed(mut self, seed: u64) -> Self {
        self.split_seed = seed;
        self.candidate_seed = derive_seed(seed, &[SEED_TAG_CANDIDATE]);
        self.shot_seed = derive_seed(seed, &[SEED_TAG_SHOT]);
        self
    }
}

/// Fixed protocol constants, recorded in every report so results are
/// interpretable without reading the code.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolSettings {
    pub smote_k: usize,
    pub batch_size: usize,
    pub batch_count: usize,
    pub scaler_fit: &'static str,
    pub tie_rule: &'static str,
    pub seed_derivation: &'static str,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        Self {
            smote_k: 5,
            batch_size: 100,
            batch_count: 4,
            scaler_fit: "train-split-only",
            tie_rule: "score 0.5 or a 50/50 readout predicts the non-stored/higher class",
            seed_derivation: "splitmix64 over (base seed, stage tags)",
        }
    }
}

/// Indices into the training split forming one prototype candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub indices: Vec<usize>,
}

/// Draws `count` distinct candidates uniformly without replacement: single
/// stored-class samples (1-prototype), stored-class pairs (2-prototype), or
/// cross-class pairs (HC). Returns all of them with a warning when fewer
/// exist.
pub fn select_candidates(
    train: &PreparedDataset,
    kind: ClassifierKind,
    stored_class: usize,
    count: usize,
    seed: u64,
) -> Result<(Vec<Candidate>, Vec<String>), ExperimentError> {
    if count == 0 {
        return Err(ExperimentError::ZeroCandidateCount);
    }
    let pair = train.class_pair;
    let by_label = |label: usize| -> Vec<usize> {
        train
            .samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.label() == label)
            .map(|(i, _)| i)
            .collect()
    };
    let mut pool: Vec<Candidate> = match kind {
        ClassifierKind::Qocc1 | ClassifierKind::Qocc2 => {
            if stored_class != pair.0 && stored_class != pair.1 {
                return Err(ExperimentError::StoredClassNotPresent { class: stored_class, pair });
            }
            let stored = by_label(stored_class);
            if kind == ClassifierKind::Qocc1 {
                stored.iter().map(|&i| Candidate { indices: vec![i] }).collect()
            } else {
                let mut pairs = Vec::new();
                for (a, &i) in stored.iter().enumerate() {
                    for &j in &stored[a + 1..] {
                        pairs.push(Candidate { indices: vec![i, j] });
                    }
                }
                pairs
            }
        }
        ClassifierKind::Hc => {
            let lo = by_label(pair.0);
            let hi = by_label(pair.1);
            let mut pairs = Vec::with_capacity(lo.len() * hi.len());
            for &i in &lo {
                for &j in &hi {
                    pairs.push(Candidate { indices: vec![i, j] });
                }
            }
            pairs
        }
    };
    if pool.is_empty() {
        return Err(ExperimentError::NoEligibleCandidates(stored_class));
    }
    let mut warnings = Vec::new();
    if pool.len() <= count {
        if pool.len() < count {
            warnings.push(format!(
                "only {} candidates available, requested {count}; using all of them",
                pool.len()
            ));
        }
        return Ok((pool, warnings));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.partial_shuffle(&mut rng, count);
    pool.truncate(count);
    Ok((pool, warnings))
}

fn build_model(
    kind: ClassifierKind,
    train: &PreparedDataset,
    indices: &[usize],
) -> Result<TrainedModel, ExperimentError> {
    let sample = |i: usize| train.samples[i].clone();
    let model = match kind {
        ClassifierKind::Qocc1 => TrainedModel::qocc1(sample(indices[0]))?,
        ClassifierKind::Qocc2 => TrainedModel::qocc2(sample(indices[0]), sample(indices[1]))?,
        ClassifierKind::Hc => TrainedModel::hc(sample(indices[0]), sample(indices[1]))?,
    };
    Ok(model)
}

/// One classification with everything the reports need.
#[derive(Debug, Clone)]
struct Classified {
    predicted: Option<usize>,
    membership: Option<f64>,
    class_distribution: Option<(f64, f64)>,
    postselection_probability: Option<f64>,
    postselection_failed: bool,
}

fn classify_one(
    model: &TrainedModel,
    sample: &PreparedSample,
    mode: ScoreMode,
    class_pair: (usize, usize),
) -> Result<Classified, ExperimentError> {
    match model.kind() {
        ClassifierKind::Qocc1 | ClassifierKind::Qocc2 => {
            let score = membership_score(sample, model, mode)?;
            let stored = model.stored_class();
            let other = if stored == class_pair.0 { class_pair.1 } else { class_pair.0 };
            Ok(Classified {
                predicted: Some(qocc_decide(score, stored, other)),
                membership: Some(score.value()),
                class_distribution: None,
                postselection_probability: None,
                postselection_failed: false,
            })
        }
        ClassifierKind::Hc => match hc_classify(sample, model, mode) {
            Ok(outcome) => Ok(Classified {
                predicted: Some(outcome.predicted),
                membership: None,
                class_distribution: Some(outcome.class_distribution),
                postselection_probability: Some(outcome.postselection_probability),
                postselection_failed: false,
            }),
            Err(ClassifierError::PostselectionFailure) => {
                // Recover the exact success probability for the record; a
                // shot-mode failure can still have nonzero exact mass.
                let probability = match hc_classify(sample, model, ScoreMode::Exact) {
                    Ok(o) => o.postselection_probability,
                    Err(ClassifierError::PostselectionFailure) => 0.0,
                    Err(e) => return Err(e.into()),
                };
                Ok(Classified {
                    predicted: None,
                    membership: None,
                    class_distribution: None,
                    postselection_probability: Some(probability),
                    postselection_failed: true,
                })
            }
            Err(e) => Err(e.into()),
        },
    }
}

/// The training stage's winner plus its audit trail.
#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub model: TrainedModel,
    pub chosen: Candidate,
    pub best_accuracy: f64,
    pub candidate_accuracies: Vec<f64>,
}

/// Evaluates every candidate on the training split minus the candidate's
/// own samples, in exact simulation, and keeps the accuracy argmax. Ties go
/// to the later-evaluated candidate.
pub fn training_stage(
    candidates: &[Candidate],
    train: &PreparedDataset,
    kind: ClassifierKind,
) -> Result<TrainingOutcome, ExperimentError> {
    if candidates.is_empty() {
        return Err(ExperimentError::NoCandidates);
    }
    let mut accuracies = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    for (ci, candidate) in candidates.iter().enumerate() {
        let model = build_model(kind, train, &candidate.indices)?;
        let mut correct = 0usize;
        let mut total = 0usize;
        for (i, sample) in train.samples.iter().enumerate() {
            if candidate.indices.contains(&i) {
                continue;
            }
            let outcome = classify_one(&model, sample, ScoreMode::Exact, train.class_pair)?;
            if outcome.predicted == Some(sample.label()) {
                correct += 1;
            }
            total += 1;
        }
        let accuracy = if total == 0 { 0.0 } else { correct as f64 / total as f64 };
        accuracies.push(accuracy);
        if best.map_or(true, |(_, b)| accuracy >= b) {
            best = Some((ci, accuracy));
        }
    }
    let (chosen_index, best_accuracy) = best.expect("candidates are non-empty");
    Ok(TrainingOutcome {
        model: build_model(kind, train, &candidates[chosen_index].indices)?,
        chosen: candidates[chosen_index].clone(),
        best_accuracy,
        candidate_accuracies: accuracies,
    })
}

/// One validation classification as it lands in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub run: usize,
    pub sample_index: usize,
    pub truth: usize,
    /// Absent when HC postselection failed; counted as a misclassification.
    pub predicted: Option<usize>,
    pub correct: bool,
    pub membership: Option<f64>,
    pub class_distribution: Option<(f64, f64)>,
    pub postselection_probability: Option<f64>,
    pub postselection_failed: bool,
}

/// Per-run accuracies and records from validating one model.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationOutcome {
    pub run_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Exact mode is deterministic, so the run loop collapses to one run.
    pub runs_collapsed: bool,
    pub postselection_failures: u64,
    pub samples: Vec<SampleRecord>,
}

/// Classifies every validation sample `runs` times (once in exact mode),
/// deriving a fresh shot seed per (run, sample).
pub fn validate_model(
    model: &TrainedModel,
    validation: &PreparedDataset,
    mode: RunMode,
    runs: usize,
    shots: u64,
    shot_seed: u64,
) -> Result<ValidationOutcome, ExperimentError> {
    if validation.samples.is_empty() {
        return Err(ExperimentError::EmptyValidation);
    }
    if runs == 0 {
        return Err(ExperimentError::ZeroRuns);
    }
    if mode == RunMode::Shots && shots == 0 {
        return Err(ExperimentError::ZeroShots);
    }
    let effective_runs = match mode {
        RunMode::Exact => 1,
        RunMode::Shots => runs,
    };
    let mut run_accuracies = Vec::with_capacity(effective_runs);
    let mut samples = Vec::with_capacity(effective_runs * validation.samples.len());
    let mut failures = 0u64;
    for run in 0..effective_runs {
        let mut correct = 0usize;
        for (si, sample) in validation.samples.iter().enumerate() {
            let score_mode = match mode {
                RunMode::Exact => ScoreMode::Exact,
                RunMode::Shots => ScoreMode::Shots {
                    shots,
                    seed: derive_seed(shot_seed, &[SEED_TAG_SAMPLE, run as u64, si as u64]),
                },
            };
            let outcome = classify_one(model, sample, score_mode, validation.class_pair)?;
            let is_correct = outcome.predicted == Some(sample.label());
            correct += usize::from(is_correct);
            failures += u64::from(outcome.postselection_failed);
            samples.push(SampleRecord {
                run,
                sample_index: si,
                truth: sample.label(),
                predicted: outcome.predicted,
                correct: is_correct,
                membership: outcome.membership,
                class_distribution: outcome.class_distribution,
                postselection_probability: outcome.postselection_probability,
                postselection_failed: outcome.postselection_failed,
            });
        }
        run_accuracies.push(correct as f64 / validation.samples.len() as f64);
    }
    let mean_accuracy = run_accuracies.iter().sum::<f64>() / run_accuracies.len() as f64;
    Ok(ValidationOutcome {
        run_accuracies,
        mean_accuracy,
        runs_collapsed: mode == RunMode::Exact,
        postselection_failures: failures,
        samples,
    })
}

/// Everything one batch produced.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub protocol: ProtocolSettings,
    pub batch_index: Option<usize>,
    pub warnings: Vec<String>,
    pub scaler_stats: ScalerStats,
    pub chosen_indices: Vec<usize>,
    pub chosen_prototypes: Vec<PreparedSample>,
    pub training_best_accuracy: f64,
    pub run_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub runs_collapsed: bool,
    pub postselection_failures: u64,
    pub samples: Vec<SampleRecord>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One report per batch plus their mean.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutcome {
    pub reports: Vec<ExperimentReport>,
    pub batch_mean_accuracy: f64,
}

/// Runs the whole protocol: load, filter, oversample, batch, split, select
/// candidates, train in exact simulation, validate in the configured mode.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, ExperimentError> {
    if config.candidate_count == 0 {
        return Err(ExperimentError::ZeroCandidateCount);
    }
    if config.runs == 0 {
        return Err(ExperimentError::ZeroRuns);
    }
    if config.shots == 0 {
        return Err(ExperimentError::ZeroShots);
    }
    let protocol = ProtocolSettings::default();
    let (raw, mut warnings) = at_stage("load", load_dataset(config.dataset, &config.data_path))?;
    let selected = select_features_and_classes(&raw);

    let rows = if config.dataset.needs_smote() {
        at_stage(
            "smote",
            smote_oversample(
                &selected.rows,
                protocol.smote_k,
                derive_seed(config.split_seed, &[SEED_TAG_SMOTE]),
            ),
        )?
    } else {
        selected.rows
    };

    let batches = if config.dataset.is_batched() {
        at_stage(
            "batch",
            make_batches(
                &rows,
                protocol.batch_size,
                protocol.batch_count,
                derive_seed(config.split_seed, &[SEED_TAG_BATCH]),
            ),
        )?
    } else {
        vec![rows]
    };

    let selected_batches: Vec<(Option<usize>, &Vec<RawRow>)> = match config.batch {
        BatchSelection::All => batches
            .iter()
            .enumerate()
            .map(|(i, b)| (config.dataset.is_batched().then_some(i), b))
            .collect(),
        BatchSelection::Index(index) => {
            if index >= batches.len() {
                return Err(ExperimentError::BatchIndexOutOfRange { index, count: batches.len() });
            }
            vec![(config.dataset.is_batched().then_some(index), &batches[index])]
        }
    };

    let mut reports = Vec::with_capacity(selected_batches.len());
    for (batch_index, batch_rows) in selected_batches {
        let split_spec = SplitSpec {
            train_fraction: config.train_fraction,
            seed: config.split_seed,
            batch_index,
        };
        let (train_rows, val_rows) = at_stage("split", train_val_split(batch_rows, &split_spec))?;
        let train = at_stage("scale", standardize_and_normalize(&train_rows, None))?;
        let validation = at_stage(
            "scale",
            standardize_and_normalize(&val_rows, Some(&train.scaler_stats)),
        )?;
        let (candidates, candidate_warnings) = at_stage(
            "candidates",
            select_candidates(
                &train,
                config.classifier,
                config.stored_class,
                config.candidate_count,
                config.candidate_seed,
            ),
        )?;
        let training = at_stage("training", training_stage(&candidates, &train, config.classifier))?;
        let outcome = at_stage(
            "validation",
            validate_model(
                &training.model,
                &validation,
                config.mode,
                config.runs,
                config.shots,
                derive_seed(
                    config.shot_seed,
                    &[SEED_TAG_BATCH_SHOTS, batch_index.unwrap_or(0) as u64],
                ),
            ),
        )?;
        let mut report_warnings = warnings.clone();
        report_warnings.extend(candidate_warnings);
        reports.push(ExperimentReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config: config.clone(),
            protocol: protocol.clone(),
            batch_index,
            warnings: report_warnings,
            scaler_stats: train.scaler_stats.clone(),
            chosen_indices: training.chosen.indices.clone(),
            chosen_prototypes: training.model.prototypes().to_vec(),
            training_best_accuracy: training.best_accuracy,
            run_accuracies: outcome.run_accuracies,
            mean_accuracy: outcome.mean_accuracy,
            runs_collapsed: outcome.runs_collapsed,
            postselection_failures: outcome.postselection_failures,
            samples: outcome.samples,
        });
    }
    warnings.clear();
    let batch_mean_accuracy =
        reports.iter().map(|r| r.mean_accuracy).sum::<f64>() / reports.len() as f64;
    Ok(ExperimentOutcome { reports, batch_mean_accuracy })
}

/// Postselection health of an HC report: how often the exact success
/// probability clears 1/2, plus its range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostselectionSummary {
    pub fraction_above_half: f64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

pub fn postselection_statistics(
    report: &ExperimentReport,
) -> Result<PostselectionSummary, ExperimentError> {
    if report.config.classifier != ClassifierKind::Hc {
        return Err(ExperimentError::NotHcReport(report.config.classifier));
    }
    // The success probability is a property of the circuit, not the shots,
    // so run 0 covers every validation sample.
    let probabilities: Vec<f64> = report
        .samples
        .iter()
        .filter(|s| s.run == 0)
        .map(|s| s.postselection_probability.expect("hc records carry the probability"))
        .collect();
    let n = probabilities.len() as f64;
    let above = probabilities.iter().filter(|&&p| p > 0.5).count() as f64;
    let mean = probabilities.iter().sum::<f64>() / n;
    let min = probabilities.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = probabilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PostselectionSummary { fraction_above_half: above / n, min, mean, max })
}
