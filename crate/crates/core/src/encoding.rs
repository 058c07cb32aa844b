//! Amplitude encoding: compiles a real unit vector of length 2^n into a
//! cascade of (multi-)controlled Ry rotations that prepares it from |0...0>.
//!
//! Angles form a binary tree. The coarsest level holds one angle splitting
//! the state norm between the two halves of the vector; each finer level
//! splits its blocks in two, controlled on the pattern of the qubits above.
//! Signs of a real vector are absorbed at the finest level, where the angle
//! for an amplitude pair (even, odd) is `2*atan2(odd, even)`; coarser levels
//! rotate by `2*asin(upper_norm / block_norm)` on nonnegative block norms.
//! A zero-norm block gets angle 0.

use thiserror::Error;

use crate::sim::{GateKind, GateOp, MAX_QUBITS};

/// Required closeness of ||v|| to 1 for encodable vectors.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("vector length {0} is not a power of two in 2..=2^{MAX_QUBITS}")]
    BadLength(usize),
    #[error("cannot encode a zero vector")]
    ZeroVector,
    #[error("vector norm {0} is not 1 within {UNIT_TOLERANCE}")]
    NotUnit(f64),
    #[error("qubit {0} plays more than one role in the loader")]
    QubitCollision(usize),
    #[error("angle tree covers {tree} qubits but {given} data qubits were given")]
    DataQubitMismatch { tree: usize, given: usize },
}

/// Rotation angles by level, coarsest first.
///
/// For an n-qubit encoding, level s (s = n..1) holds 2^(n-s) angles, one per
/// control pattern of the qubits already loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    num_qubits: usize,
    levels: Vec<Vec<f64>>,
}

impl AngleTree {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Angles of level `s` (1..=num_qubits); level num_qubits is coarsest.
    pub fn level(&self, s: usize) -> &[f64] {
        &self.levels[self.num_qubits - s]
    }

    /// Iterates (s, angles) from the coarsest level down to 1, which is the
    /// order the loader applies them in.
    pub fn levels_coarse_to_fine(&self) -> impl Iterator<Item = (usize, &[f64])> {
        let n = self.num_qubits;
        self.levels.iter().enumerate().map(move |(d, angles)| (n - d, angles.as_slice()))
    }

    /// Total number of rotation gates the loader will emit: 2^n - 1.
    pub fn rotation_count(&self) -> usize {
        (1 << self.num_qubits) - 1
    }
}

/// Where a loader acts: which qubits carry the data and which extra qubits
/// (with required bit values) gate the whole load.
#[derive(Debug, Clone, PartialEq)]
pub struct LoaderSpec {
    pub data_qubits: Vec<usize>,
    pub extra_controls: Vec<(usize, bool)>,
    pub angle_tree: AngleTree,
}

/// Computes the rotation-angle tree that prepares `v` from |0...0>.
pub fn angles_from_vector(v: &[f64]) -> Result<AngleTree, EncodingError> {
    let len = v.len();
    if len < 2 || !len.is_power_of_two() || len > (1 << MAX_QUBITS) {
        return Err(EncodingError::BadLength(len));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(EncodingError::ZeroVector);
    }
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(EncodingError::NotUnit(norm));
    }
    let n = len.trailing_zeros() as usize;

    // Finest level: signed pair angles plus the pair norms feeding upward.
    let mut fine = Vec::with_capacity(len / 2);
    let mut block_norms = Vec::with_capacity(len / 2);
    for pair in v.chunks_exact(2) {
        fine.push(2.0 * pair[1].atan2(pair[0]));
        block_norms.push(pair[0].hypot(pair[1]));
    }
    let mut levels = vec![fine];

    // Coarser levels out of nonnegative block norms.
    while block_norms.len() > 1 {
        let mut angles = Vec::with_capacity(block_norms.len() / 2);
        let mut parents = Vec::with_capacity(block_norms.len() / 2);
        for pair in block_norms.chunks_exact(2) {
            let parent = pair[0].hypot(pair[1]);
            if parent == 0.0 {
                angles.push(0.0);
            } else {
                angles.push(2.0 * (pair[1] / parent).min(1.0).asin());
            }
            parents.push(parent);
        }
        levels.push(angles);
        block_norms = parents;
    }
    levels.reverse();
    Ok(AngleTree { num_qubits: n, levels })
}

/// Special case for 2-feature samples: the single angle t with
/// (cos t/2, sin t/2) = v, i.e. t = 2*atan2(v1, v0) in (-2pi, 2pi].
pub fn two_feature_angle(v: &[f64]) -> Result<f64, EncodingError> {
    if v.len() != 2 {
        return Err(EncodingError::BadLength(v.len()));
    }
    let norm = v[0].hypot(v[1]);
    if norm == 0.0 {
        return Err(EncodingError::ZeroVector);
    }
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(EncodingError::NotUnit(norm));
    }
    Ok(2.0 * v[1].atan2(v[0]))
}

/// Emits the loading gate sequence for `spec`, coarsest level first.
///
/// Each rotation targets the data qubit of its level and is controlled on
/// the higher data qubits matching the angle's pattern plus every extra
/// control. Pattern or extra-control bits that must be 0 are realized by an
/// X on that qubit before and after the rotation.
pub fn loader_circuit(spec: &LoaderSpec) -> Result<Vec<GateOp>, EncodingError> {
    let n = spec.angle_tree.num_qubits();
    if spec.data_qubits.len() != n {
        return Err(EncodingError::DataQubitMismatch { tree: n, given: spec.data_qubits.len() });
    }
    let mut seen = Vec::new();
    for &q in spec.data_qubits.iter().chain(spec.extra_controls.iter().map(|(q, _)| q)) {
        if seen.contains(&q) {
            return Err(EncodingError::QubitCollision(q));
        }
        seen.push(q);
    }

    let mut ops = Vec::new();
    for (s, angles) in spec.angle_tree.levels_coarse_to_fine() {
        let depth = n - s;
        let target = spec.data_qubits[depth];
        for (j, &angle) in angles.iter().enumerate() {
            let mut controls = Vec::with_capacity(depth + spec.extra_controls.len());
            let mut off_controls = Vec::new();
            for d in 0..depth {
                let q = spec.data_qubits[d];
                controls.push(q);
                if (j >> (depth - 1 - d)) & 1 == 0 {
                    off_controls.push(q);
                }
            }
            for &(q, required) in &spec.extra_controls {
                controls.push(q);
                if !required {
                    off_controls.push(q);
                }
            }
            for &q in &off_controls {
                ops.push(GateOp::x(q));
            }
            let rotation = GateOp::new(GateKind::Ry(angle), target, &controls)
                .expect("loader qubit roles were validated");
            ops.push(rotation);
            for &q in &off_controls {
                ops.push(GateOp::x(q));
            }
        }
    }
    Ok(ops)
}
