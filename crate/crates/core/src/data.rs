//! Dataset ingestion and the preparation pipeline: schema-specific loading,
//! feature/class selection, minority oversampling, batching, z-scoring, unit
//! normalization, and stratified train/validation splitting.
//!
//! Class ids are assigned by sorted order of the distinct label strings in
//! the file, so they are stable under row reordering. After every transform
//! the row order is deterministic for a fixed seed.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{ClassifierError, PreparedSample};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("input rows are empty")]
    EmptyInput,
    #[error("expected exactly two classes, found {0}")]
    NotTwoClasses(usize),
    #[error("expected exactly two features, found {0}")]
    NotTwoFeatures(usize),
    #[error("minority class needs at least 2 samples to oversample, found {0}")]
    DegenerateMinority(usize),
    #[error("neighbor count must be at least 1")]
    ZeroNeighbors,
    #[error("batch size {0} must be even to balance classes")]
    OddBatchSize(usize),
    #[error("class {label} has {available} rows, need {needed} for {count} batches")]
    InsufficientRows { label: usize, available: usize, needed: usize, count: usize },
    #[error("feature {index} has zero variance in the fitting set")]
    ZeroVariance { index: usize },
    #[error("row {index} standardizes to the zero vector and cannot be normalized")]
    ZeroNormRow { index: usize },
    #[error("need at least {min} samples to split, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("train fraction {0} must lie in (0, 1)")]
    BadFraction(f64),
    #[error(transparent)]
    Sample(#[from] ClassifierError),
}

/// The three supported source datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetName {
    Iris,
    Haberman,
    Skin,
}

impl DatasetName {
    pub fn expected_rows(self) -> usize {
        match self {
            DatasetName::Iris => 150,
            DatasetName::Haberman => 306,
            DatasetName::Skin => 245_057,
        }
    }

    pub fn expected_classes(self) -> usize {
        match self {
            DatasetName::Iris => 3,
            DatasetName::Haberman | DatasetName::Skin => 2,
        }
    }

    pub fn raw_feature_count(self) -> usize {
        match self {
            DatasetName::Iris => 4,
            DatasetName::Haberman | DatasetName::Skin => 3,
        }
    }

    fn separator(self) -> char {
        match self {
            DatasetName::Skin => '\t',
            _ => ',',
        }
    }

    /// Haberman and Skin are imbalanced and get SMOTE; Iris does not.
    pub fn needs_smote(self) -> bool {
        !matches!(self, DatasetName::Iris)
    }

    /// Haberman and Skin are drawn into batches; Iris is used whole.
    pub fn is_batched(self) -> bool {
        !matches!(self, DatasetName::Iris)
    }
}

impl fmt::Display for DatasetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetName::Iris => write!(f, "iris"),
            DatasetName::Haberman => write!(f, "haberman"),
            DatasetName::Skin => write!(f, "skin"),
        }
    }
}

impl FromStr for DatasetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iris" => Ok(DatasetName::Iris),
            "haberman" => Ok(DatasetName::Haberman),
            "skin" => Ok(DatasetName::Skin),
            other => Err(format!("unknown dataset '{other}' (expected iris|haberman|skin)")),
        }
    }
}

/// One observation: raw feature values and a class id.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub features: Vec<f64>,
    pub label: usize,
}

/// A parsed dataset before any preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub name: DatasetName,
    /// Distinct label strings, sorted; class id = position here.
    pub label_names: Vec<String>,
    pub rows: Vec<RawRow>,
}

/// Parses a dataset file under its schema. Returns the dataset plus warnings
/// for row-count or class-count mismatches against the expected shape.
pub fn load_dataset(
    name: DatasetName,
    path: &Path,
) -> Result<(RawDataset, Vec<String>), DataError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let sep = name.separator();
    let want_features = name.raw_feature_count();

    let mut parsed: Vec<(Vec<f64>, String)> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(sep).map(str::trim).collect();
        if fields.len() != want_features + 1 {
            return Err(DataError::Parse {
                path: display.clone(),
                line: line_no + 1,
                message: format!(
                    "expected {} fields separated by {:?}, found {}",
                    want_features + 1,
                    sep,
                    fields.len()
                ),
            });
        }
        let mut features = Vec::with_capacity(want_features);
        for field in &fields[..want_features] {
            let value: f64 = field.parse().map_err(|_| DataError::Parse {
                path: display.clone(),
                line: line_no + 1,
                message: format!("not a number: {field:?}"),
            })?;
            features.push(value);
        }
        parsed.push((features, fields[want_features].to_string()));
    }

    let mut label_names: Vec<String> = parsed.iter().map(|(_, l)| l.clone()).collect();
    label_names.sort();
    label_names.dedup();
    let ids: HashMap<&str, usize> =
        label_names.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let rows: Vec<RawRow> = parsed
        .iter()
        .map(|(features, label)| RawRow { features: features.clone(), label: ids[label.as_str()] })
        .collect();

    let mut warnings = Vec::new();
    if rows.len() != name.expected_rows() {
        warnings.push(format!(
            "{name}: expected {} rows, found {}",
            name.expected_rows(),
            rows.len()
        ));
    }
    if label_names.len() != name.expected_classes() {
        warnings.push(format!(
            "{name}: expected {} classes, found {}",
            name.expected_classes(),
            label_names.len()
        ));
    }
    Ok((RawDataset { name, label_names, rows }, warnings))
}

/// Reduces a raw dataset to the two classes and two features the experiments
/// use: Iris keeps its first two classes with (sepal width, petal length);
/// Haberman drops the year-of-operation column; Skin keeps (R, B) out of its
/// B,G,R column order.
pub fn select_features_and_classes(raw: &RawDataset) -> RawDataset {
    let (keep, class_limit): (&[usize], usize) = match raw.name {
        DatasetName::Iris => (&[1, 2], 2),
        DatasetName::Haberman => (&[0, 2], 2),
        DatasetName::Skin => (&[2, 0], 2),
    };
    let rows = raw
        .rows
        .iter()
        .filter(|row| row.label < class_limit)
        .map(|row| RawRow {
            features: keep.iter().map(|&i| row.features[i]).collect(),
            label: row.label,
        })
        .collect();
    RawDataset {
        name: raw.name,
        label_names: raw.label_names.iter().take(class_limit).cloned().collect(),
        rows,
    }
}

fn class_counts(rows: &[RawRow]) -> Result<[(usize, usize); 2], DataError> {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for row in rows {
        *counts.entry(row.label).or_insert(0) += 1;
    }
    if counts.len() != 2 {
        return Err(DataError::NotTwoClasses(counts.len()));
    }
    let mut pairs: Vec<(usize, usize)> = counts.into_iter().collect();
    pairs.sort_unstable();
    Ok([pairs[0], pairs[1]])
}

fn euclidean_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The SMOTE interpolation step: x + g * (nn - x).
fn smote_interpolate(x: &[f64], nn: &[f64], g: f64) -> Vec<f64> {
    x.iter().zip(nn).map(|(a, b)| a + g * (b - a)).collect()
}

/// Appends synthetic minority samples until the class counts are equal.
///
/// Each synthetic point interpolates a uniformly chosen original minority
/// sample toward one of its `k` nearest minority neighbors with a uniform
/// gain in [0, 1]. Already balanced input is returned unchanged.
pub fn smote_oversample(rows: &[RawRow], k: usize, seed: u64) -> Result<Vec<RawRow>, DataError> {
    if k == 0 {
        return Err(DataError::ZeroNeighbors);
    }
    if rows.is_empty() {
        return Err(DataError::EmptyInput);
    }
    let [(label_a, count_a), (label_b, count_b)] = class_counts(rows)?;
    if count_a == count_b {
        return Ok(rows.to_vec());
    }
    let (minority_label, deficit) = if count_a < count_b {
        (label_a, count_b - count_a)
    } else {
        (label_b, count_a - count_b)
    };

    let minority: Vec<&RawRow> = rows.iter().filter(|r| r.label == minority_label).collect();
    if minority.len() < 2 {
        return Err(DataError::DegenerateMinority(minority.len()));
    }
    let k_eff = k.min(minority.len() - 1);

    // Neighbor lists are computed lazily per base point; ties in distance
    // break by index so results do not depend on sort internals.
    let mut neighbor_cache: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = rows.to_vec();
    for _ in 0..deficit {
        let base = rng.gen_range(0..minority.len());
        let neighbors = neighbor_cache.entry(base).or_insert_with(|| {
            let mut by_distance: Vec<(f64, usize)> = minority
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != base)
                .map(|(i, row)| (euclidean_sq(&minority[base].features, &row.features), i))
                .collect();
            by_distance
                .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            by_distance.into_iter().take(k_eff).map(|(_, i)| i).collect()
        });
        let nn = neighbors[rng.gen_range(0..neighbors.len())];
        let g: f64 = rng.gen_range(0.0..=1.0);
        out.push(RawRow {
            features: smote_interpolate(&minority[base].features, &minority[nn].features, g),
            label: minority_label,
        });
    }
    Ok(out)
}

/// Draws `count` disjoint class-balanced batches of `batch_size` rows each,
/// without replacement, deterministically per seed.
pub fn make_batches(
    rows: &[RawRow],
    batch_size: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<RawRow>>, DataError> {
    if batch_size % 2 != 0 {
        return Err(DataError::OddBatchSize(batch_size));
    }
    let per_class = batch_size / 2;
    let needed = per_class * count;
    let [(label_a, _), (label_b, _)] = class_counts(rows)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<Vec<usize>> = Vec::with_capacity(2);
    for label in [label_a, label_b] {
        let mut indices: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == label)
            .map(|(i, _)| i)
            .collect();
        if indices.len() < needed {
            return Err(DataError::InsufficientRows {
                label,
                available: indices.len(),
                needed,
                count,
            });
        }
        indices.shuffle(&mut rng);
        indices.truncate(needed);
        picks.push(indices);
    }

    let batches = (0..count)
        .map(|b| {
            picks
                .iter()
                .flat_map(|class_picks| &class_picks[b * per_class..(b + 1) * per_class])
                .map(|&i| rows[i].clone())
                .collect()
        })
        .collect();
    Ok(batches)
}

/// Per-feature mean and population standard deviation used for z-scoring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalerStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl ScalerStats {
    pub fn fit(rows: &[RawRow]) -> Result<Self, DataError> {
        if rows.is_empty() {
            return Err(DataError::EmptyInput);
        }
        let dims = rows[0].features.len();
        let n = rows.len() as f64;
        let mut means = vec![0.0; dims];
        for row in rows {
            for (m, x) in means.iter_mut().zip(&row.features) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![0.0; dims];
        for row in rows {
            for ((v, x), m) in vars.iter_mut().zip(&row.features).zip(&means) {
                *v += (x - m) * (x - m);
            }
        }
        let mut stds = Vec::with_capacity(dims);
        for (index, v) in vars.iter().enumerate() {
            let std = (v / n).sqrt();
            if std == 0.0 {
                return Err(DataError::ZeroVariance { index });
            }
            stds.push(std);
        }
        Ok(Self { means, stds })
    }

    pub fn transform(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((x, m), s)| (x - m) / s)
            .collect()
    }
}

/// Samples ready for amplitude encoding: z-scored, unit-norm, two classes.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDataset {
    pub samples: Vec<PreparedSample>,
    pub class_pair: (usize, usize),
    pub scaler_stats: ScalerStats,
}

impl PreparedDataset {
    /// Audit export, one `feature0,feature1,label` line per sample.
    pub fn export_lines(&self) -> String {
        let mut out = String::new();
        for sample in &self.samples {
            let f = sample.features();
            out.push_str(&format!("{},{},{}\n", f[0], f[1], sample.label()));
        }
        out
    }
}

/// Z-scores every row (with `stats`, or stats fitted on `rows` when absent)
/// and scales each row to unit Euclidean norm.
pub fn standardize_and_normalize(
    rows: &[RawRow],
    stats: Option<&ScalerStats>,
) -> Result<PreparedDataset, DataError> {
    if rows.is_empty() {
        return Err(DataError::EmptyInput);
    }
    if rows[0].features.len() != 2 {
        return Err(DataError::NotTwoFeatures(rows[0].features.len()));
    }
    let stats = match stats {
        Some(s) => s.clone(),
        None => ScalerStats::fit(rows)?,
    };
    let mut samples = Vec::with_capacity(rows.len());
    for (index, row) in rows.iter().enumerate() {
        let z = stats.transform(&row.features);
        let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(DataError::ZeroNormRow { index });
        }
        let unit: Vec<f64> = z.iter().map(|x| x / norm).collect();
        samples.push(PreparedSample::new(unit, row.label)?);
    }
    let [(label_a, _), (label_b, _)] = class_counts(rows)?;
    Ok(PreparedDataset { samples, class_pair: (label_a, label_b), scaler_stats: stats })
}

/// How to split: the train share, the shuffle seed, and which batch the
/// split belongs to (echoed into reports).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub batch_index: Option<usize>,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        Self { train_fraction, seed, batch_index: None }
    }
}

/// Stratified-by-class split; per class, round(fraction * n) rows go to the
/// training side. Deterministic per seed.
pub fn train_val_split(
    rows: &[RawRow],
    spec: &SplitSpec,
) -> Result<(Vec<RawRow>, Vec<RawRow>), DataError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(DataError::BadFraction(spec.train_fraction));
    }
    if rows.len() < 10 {
        return Err(DataError::TooFewSamples { min: 10, got: rows.len() });
    }
    let mut labels: Vec<usize> = rows.iter().map(|r| r.label).collect();
    labels.sort_unstable();
    labels.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train = Vec::new();
    let mut val = Vec::new();
    for label in labels {
        let mut indices: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == label)
            .map(|(i, _)| i)
            .collect();
        indices.shuffle(&mut rng);
        let take = ((spec.train_fraction * indices.len() as f64).round() as usize)
            .clamp(1, indices.len().max(2) - 1)
            .min(indices.len());
        for (pos, &i) in indices.iter().enumerate() {
            if pos < take {
                train.push(rows[i].clone());
            } else {
                val.push(rows[i].clone());
            }
        }
    }
    Ok((train, val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use std::path::PathBuf;

    fn repo_data(file: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
    }

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn row(features: &[f64], label: usize) -> RawRow {
        RawRow { features: features.to_vec(), label }
    }

    #[test]
    fn loads_bundled_iris() {
        let (iris, warnings) = load_dataset(DatasetName::Iris, &repo_data("iris.csv")).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(iris.rows.len(), 150);
        assert_eq!(iris.label_names.len(), 3);
        assert_eq!(iris.rows[0].features.len(), 4);
        // Sorted label names give setosa id 0 and versicolor id 1.
        assert_eq!(iris.label_names[0], "Iris-setosa");
        assert_eq!(iris.label_names[1], "Iris-versicolor");

        let selected = select_features_and_classes(&iris);
        assert_eq!(selected.rows.len(), 100);
        assert!(selected.rows.iter().all(|r| r.features.len() == 2 && r.label < 2));
        // First iris row is (5.1, 3.5, 1.4, 0.2): keep sepal width and petal
        // length.
        assert_eq!(selected.rows[0].features, vec![3.5, 1.4]);
    }

    #[test]
    fn haberman_schema_drops_year_column() {
        let file = write_temp("30,64,1,1\n30,62,3,1\n34,59,0,2\n34,66,9,2\n");
        let (ds, warnings) = load_dataset(DatasetName::Haberman, file.path()).unwrap();
        assert_eq!(ds.rows.len(), 4);
        assert!(warnings.iter().any(|w| w.contains("expected 306 rows")));
        let selected = select_features_and_classes(&ds);
        assert_eq!(selected.rows[0].features, vec![30.0, 1.0]);
        assert_eq!(selected.rows[0].label, 0);
        assert_eq!(selected.rows[2].label, 1);
    }

    #[test]
    fn skin_schema_keeps_r_then_b() {
        let file = write_temp("74\t85\t123\t1\n200\t150\t90\t2\n");
        let (ds, _) = load_dataset(DatasetName::Skin, file.path()).unwrap();
        let selected = select_features_and_classes(&ds);
        assert_eq!(selected.rows[0].features, vec![123.0, 74.0]);
        assert_eq!(selected.rows[1].features, vec![90.0, 200.0]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let file = write_temp("5.1,3.5,1.4,0.2,Iris-setosa\n5.0,3.0,1.2,Iris-setosa\n");
        let err = load_dataset(DatasetName::Iris, file.path()).unwrap_err();
        match err {
            DataError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let file = write_temp("5.1,3.5,oops,0.2,Iris-setosa\n");
        let err = load_dataset(DatasetName::Iris, file.path()).unwrap_err();
        match err {
            DataError::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("oops"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn smote_interpolation_formula() {
        assert_eq!(smote_interpolate(&[0.0, 0.0], &[1.0, 1.0], 0.5), vec![0.5, 0.5]);
        assert_eq!(smote_interpolate(&[2.0, 4.0], &[2.0, 4.0], 0.7), vec![2.0, 4.0]);
    }

    #[test]
    fn smote_balances_and_is_deterministic() {
        let mut rows = Vec::new();
        for i in 0..9 {
            rows.push(row(&[i as f64, (i * 2) as f64], 0));
        }
        rows.push(row(&[0.5, 0.5], 1));
        rows.push(row(&[1.5, 1.0], 1));
        rows.push(row(&[4.0, 2.0], 1));

        let balanced = smote_oversample(&rows, 5, 13).unwrap();
        let ones = balanced.iter().filter(|r| r.label == 1).count();
        let zeros = balanced.iter().filter(|r| r.label == 0).count();
        assert_eq!(ones, zeros);
        assert_eq!(balanced.len(), 18);
        // Original rows are preserved as a prefix.
        assert_eq!(&balanced[..rows.len()], &rows[..]);
        assert_eq!(balanced, smote_oversample(&rows, 5, 13).unwrap());
        assert_ne!(balanced, smote_oversample(&rows, 5, 14).unwrap());
    }

    #[test]
    fn smote_noop_when_balanced_and_degenerate_error() {
        let rows = vec![row(&[0.0, 0.0], 0), row(&[1.0, 1.0], 1)];
        assert_eq!(smote_oversample(&rows, 5, 1).unwrap(), rows);

        let rows = vec![row(&[0.0, 0.0], 0), row(&[1.0, 0.0], 0), row(&[1.0, 1.0], 1)];
        assert!(matches!(
            smote_oversample(&rows, 5, 1),
            Err(DataError::DegenerateMinority(1))
        ));
        assert!(matches!(smote_oversample(&rows, 0, 1), Err(DataError::ZeroNeighbors)));
    }

    #[test]
    fn batches_are_balanced_and_disjoint() {
        let mut rows = Vec::new();
        for i in 0..300 {
            rows.push(row(&[i as f64, 0.0], 0));
            rows.push(row(&[i as f64, 1.0], 1));
        }
        let batches = make_batches(&rows, 100, 4, 5).unwrap();
        assert_eq!(batches.len(), 4);
        let mut seen = std::collections::HashSet::new();
        for batch in &batches {
            assert_eq!(batch.len(), 100);
            assert_eq!(batch.iter().filter(|r| r.label == 0).count(), 50);
            for r in batch {
                assert!(seen.insert((r.features[0].to_bits(), r.features[1].to_bits(), r.label)));
            }
        }
        assert_eq!(batches, make_batches(&rows, 100, 4, 5).unwrap());

        let err = make_batches(&rows[..100], 100, 4, 5).unwrap_err();
        assert!(matches!(err, DataError::InsufficientRows { .. }));
    }

    #[test]
    fn zscore_uses_population_std() {
        let rows = vec![row(&[1.0, 1.0], 0), row(&[2.0, 5.0], 0), row(&[3.0, 9.0], 1)];
        let stats = ScalerStats::fit(&rows).unwrap();
        assert!((stats.means[0] - 2.0).abs() < 1e-12);
        let expect = (2.0f64 / 3.0).sqrt();
        assert!((stats.stds[0] - expect).abs() < 1e-12);
        let z0: Vec<f64> = rows.iter().map(|r| stats.transform(&r.features)[0]).collect();
        for (z, want) in z0.iter().zip([-1.224744871391589, 0.0, 1.224744871391589]) {
            assert!((z - want).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_yields_unit_rows() {
        // Identity scaling via explicit stats, then (3, 4) -> (0.6, 0.8).
        let stats = ScalerStats { means: vec![0.0, 0.0], stds: vec![1.0, 1.0] };
        let rows = vec![row(&[3.0, 4.0], 0), row(&[-1.0, 0.0], 1)];
        let prepared = standardize_and_normalize(&rows, Some(&stats)).unwrap();
        assert!((prepared.samples[0].features()[0] - 0.6).abs() < 1e-12);
        assert!((prepared.samples[0].features()[1] - 0.8).abs() < 1e-12);
        for s in &prepared.samples {
            let norm: f64 = s.features().iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
        }
        assert_eq!(prepared.class_pair, (0, 1));
    }

    #[test]
    fn scaling_error_paths() {
        let rows = vec![row(&[1.0, 2.0], 0), row(&[1.0, 3.0], 1)];
        assert!(matches!(
            standardize_and_normalize(&rows, None),
            Err(DataError::ZeroVariance { index: 0 })
        ));
        let stats = ScalerStats { means: vec![3.0, 4.0], stds: vec![1.0, 1.0] };
        let rows = vec![row(&[3.0, 4.0], 0), row(&[0.0, 0.0], 1)];
        assert!(matches!(
            standardize_and_normalize(&rows, Some(&stats)),
            Err(DataError::ZeroNormRow { index: 0 })
        ));
    }

    #[test]
    fn export_lines_format() {
        let stats = ScalerStats { means: vec![0.0, 0.0], stds: vec![1.0, 1.0] };
        let rows = vec![row(&[3.0, 4.0], 1), row(&[-5.0, 0.0], 0)];
        let prepared = standardize_and_normalize(&rows, Some(&stats)).unwrap();
        assert_eq!(prepared.export_lines(), "0.6,0.8,1\n-1,0,0\n");
    }

    #[test]
    fn split_is_stratified_and_deterministic() {
        let mut rows = Vec::new();
        for i in 0..50 {
            rows.push(row(&[i as f64, 0.0], 0));
            rows.push(row(&[i as f64, 1.0], 1));
        }
        let spec = SplitSpec::new(0.7, 21);
        let (train, val) = train_val_split(&rows, &spec).unwrap();
        assert_eq!(train.len(), 70);
        assert_eq!(val.len(), 30);
        assert_eq!(train.iter().filter(|r| r.label == 0).count(), 35);
        assert_eq!(val.iter().filter(|r| r.label == 0).count(), 15);

        let (train2, val2) = train_val_split(&rows, &spec).unwrap();
        assert_eq!(train, train2);
        assert_eq!(val, val2);

        // Disjoint, and together they cover the input.
        let key = |r: &RawRow| (r.features[0].to_bits(), r.features[1].to_bits(), r.label);
        let mut seen: std::collections::HashSet<_> = train.iter().map(key).collect();
        assert_eq!(seen.len(), train.len());
        for r in &val {
            assert!(seen.insert(key(r)));
        }
        assert_eq!(seen.len(), rows.len());
    }

    #[test]
    fn split_input_validation() {
        let rows = vec![row(&[0.0, 0.0], 0); 5];
        assert!(matches!(
            train_val_split(&rows, &SplitSpec::new(0.7, 1)),
            Err(DataError::TooFewSamples { min: 10, got: 5 })
        ));
        let rows = vec![row(&[0.0, 0.0], 0); 12];
        assert!(matches!(
            train_val_split(&rows, &SplitSpec::new(1.0, 1)),
            Err(DataError::BadFraction(_))
        ));
    }
}
