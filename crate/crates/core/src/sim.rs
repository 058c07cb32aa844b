//! Minimal exact statevector simulator for controlled single-qubit gates.
//!
//! Basis-index convention: qubit 0 is the leftmost symbol in ket notation,
//! i.e. for a basis index `i` of an `n`-qubit state, qubit `k` holds bit
//! `n - 1 - k` of `i`. With this convention `|10>` on two qubits is index 2.
//!
//! All probability sums accumulate sequentially over ascending basis indices.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Tolerance for exact-simulation assertions (norms, unitarity).
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Largest supported register; 2^16 amplitudes keep dense simulation cheap.
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("qubit count {0} outside supported range 1..={MAX_QUBITS}")]
    QubitCountOutOfRange(usize),
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    QubitIndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("target qubit {0} is also listed as a control")]
    TargetIsControl(usize),
    #[error("control qubit {0} listed more than once")]
    DuplicateControl(usize),
    #[error("2x2 matrix is not unitary within {NORM_TOLERANCE}")]
    NotUnitary,
    #[error("amplitude count {0} is not a power of two in 2..=2^{MAX_QUBITS}")]
    BadAmplitudeCount(usize),
    #[error("state norm^2 = {0} deviates from 1 beyond tolerance")]
    NotNormalized(f64),
    #[error("conditioning on qubit {qubit} = {value} has zero probability")]
    DegenerateCondition { qubit: usize, value: u8 },
    #[error("measurement qubit list is empty")]
    EmptyQubitList,
    #[error("measurement qubit {0} listed more than once")]
    DuplicateMeasureQubit(usize),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("circuit has {circuit} qubits but state has {state}")]
    QubitCountMismatch { circuit: usize, state: usize },
}

/// The 2x2 operator applied to the target qubit.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    H,
    /// Rotation about the y axis: [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
    Ry(f64),
    /// Arbitrary 2x2 unitary, row-major.
    Unitary2x2([[Complex64; 2]; 2]),
}

impl GateKind {
    pub(crate) fn matrix(&self) -> [[Complex64; 2]; 2] {
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            GateKind::X => [[re(0.0), re(1.0)], [re(1.0), re(0.0)]],
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [[re(h), re(h)], [re(h), re(-h)]]
            }
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                [[re(c), re(-s)], [re(s), re(c)]]
            }
            GateKind::Unitary2x2(m) => *m,
        }
    }

    fn check_unitary(&self) -> Result<(), SimError> {
        let m = match self {
            GateKind::Unitary2x2(m) => m,
            _ => return Ok(()),
        };
        // U^dagger U = I entrywise within tolerance.
        for row in 0..2 {
            for col in 0..2 {
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    sum += m[k][row].conj() * m[k][col];
                }
                let expected = if row == col { 1.0 } else { 0.0 };
                if (sum - expected).norm() > NORM_TOLERANCE {
                    return Err(SimError::NotUnitary);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::X => write!(f, "x"),
            GateKind::H => write!(f, "h"),
            GateKind::Ry(theta) => write!(f, "ry({theta:.9})"),
            GateKind::Unitary2x2(_) => write!(f, "u2x2"),
        }
    }
}

/// A single-qubit operation with zero or more control qubits.
///
/// The operator fires only on basis states where every control bit is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize, controls: &[usize]) -> Result<Self, SimError> {
        let mut controls = controls.to_vec();
        controls.sort_unstable();
        for pair in controls.windows(2) {
            if pair[0] == pair[1] {
                return Err(SimError::DuplicateControl(pair[0]));
            }
        }
        if controls.contains(&target) {
            return Err(SimError::TargetIsControl(target));
        }
        kind.check_unitary()?;
        Ok(Self { kind, target, controls })
    }

    pub fn x(target: usize) -> Self {
        Self { kind: GateKind::X, target, controls: Vec::new() }
    }

    pub fn h(target: usize) -> Self {
        Self { kind: GateKind::H, target, controls: Vec::new() }
    }

    pub fn ry(theta: f64, target: usize) -> Self {
        Self { kind: GateKind::Ry(theta), target, controls: Vec::new() }
    }

    fn validate(&self, num_qubits: usize) -> Result<(), SimError> {
        if self.target >= num_qubits {
            return Err(SimError::QubitIndexOutOfRange { qubit: self.target, num_qubits });
        }
        for (i, &c) in self.controls.iter().enumerate() {
            if c >= num_qubits {
                return Err(SimError::QubitIndexOutOfRange { qubit: c, num_qubits });
            }
            if c == self.target {
                return Err(SimError::TargetIsControl(c));
            }
            if self.controls[..i].contains(&c) {
                return Err(SimError::DuplicateControl(c));
            }
        }
        self.kind.check_unitary()
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} q{}", self.kind, self.target)?;
        if !self.controls.is_empty() {
            let ctrls: Vec<String> = self.controls.iter().map(|c| format!("q{c}")).collect();
            write!(f, " [ctrl {}]", ctrls.join(","))?;
        }
        Ok(())
    }
}

/// An ordered list of gate operations on a fixed-width register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self, SimError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(SimError::QubitCountOutOfRange(num_qubits));
        }
        Ok(Self { num_qubits, ops: Vec::new() })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn push(&mut self, op: GateOp) -> Result<(), SimError> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<(), SimError> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    /// Runs the circuit on |0...0> and returns the final state.
    pub fn simulate(&self) -> Result<StateVector, SimError> {
        let mut state = StateVector::new(self.num_qubits)?;
        state.run(self)?;
        Ok(state)
    }
}

/// Dense complex amplitude array over the 2^n computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The ground state |0...0>.
    pub fn new(num_qubits: usize) -> Result<Self, SimError> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(SimError::QubitCountOutOfRange(num_qubits));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Builds a state from explicit amplitudes; must be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() || len > (1 << MAX_QUBITS) {
            return Err(SimError::BadAmplitudeCount(len));
        }
        let state = Self { num_qubits: len.trailing_zeros() as usize, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.num_qubits {
            return Err(SimError::QubitIndexOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// Bit of `qubit` within basis index `index` (qubit 0 = most significant).
    #[inline]
    fn bit(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.num_qubits - 1 - qubit)) & 1
    }

    /// Applies one controlled gate in place.
    ///
    /// Basis pairs that differ only in the target bit and have every control
    /// bit set are mixed by the 2x2 matrix; all other amplitudes are left
    /// untouched (bit-exactly).
    pub fn apply(&mut self, op: &GateOp) -> Result<(), SimError> {
        op.validate(self.num_qubits)?;
        let m = op.kind.matrix();
        let n = self.num_qubits;
        let target_mask = 1usize << (n - 1 - op.target);
        let mut control_mask = 0usize;
        for &c in &op.controls {
            control_mask |= 1 << (n - 1 - c);
        }
        for i in 0..self.amplitudes.len() {
            if i & target_mask != 0 || i & control_mask != control_mask {
                continue;
            }
            let j = i | target_mask;
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[j];
            self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// Applies every op of `circuit` in order.
    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits != self.num_qubits {
            return Err(SimError::QubitCountMismatch {
                circuit: circuit.num_qubits,
                state: self.num_qubits,
            });
        }
        for op in &circuit.ops {
            self.apply(op)?;
        }
        Ok(())
    }

    /// Probability of measuring `qubit` as 0 and as 1.
    pub fn marginal_probability(&self, qubit: usize) -> Result<(f64, f64), SimError> {
        self.check_qubit(qubit)?;
        let mut p = [0.0f64; 2];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            p[self.bit(i, qubit)] += amp.norm_sqr();
        }
        Ok((p[0], p[1]))
    }

    /// Distribution of `query_qubit` within the subspace where `cond_qubit`
    /// equals `cond_value`, renormalized to sum to 1.
    pub fn conditional_distribution(
        &self,
        cond_qubit: usize,
        cond_value: bool,
        query_qubit: usize,
    ) -> Result<(f64, f64), SimError> {
        self.check_qubit(cond_qubit)?;
        self.check_qubit(query_qubit)?;
        let want = usize::from(cond_value);
        let mut p = [0.0f64; 2];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            if self.bit(i, cond_qubit) == want {
                p[self.bit(i, query_qubit)] += amp.norm_sqr();
            }
        }
        let total = p[0] + p[1];
        if total == 0.0 {
            return Err(SimError::DegenerateCondition {
                qubit: cond_qubit,
                value: want as u8,
            });
        }
        Ok((p[0] / total, p[1] / total))
    }

    /// Samples `shots` measurement outcomes of the listed qubits.
    ///
    /// Keys are bitstrings with the first listed qubit leftmost. Sampling is
    /// performed on the exact marginal distribution with a ChaCha8 generator,
    /// so results are identical for identical seeds.
    pub fn sample_counts(
        &self,
        qubits: &[usize],
        shots: u64,
        seed: u64,
    ) -> Result<BTreeMap<String, u64>, SimError> {
        if qubits.is_empty() {
            return Err(SimError::EmptyQubitList);
        }
        if shots == 0 {
            return Err(SimError::ZeroShots);
        }
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateMeasureQubit(q));
            }
        }
        let width = qubits.len();
        let mut probs = vec![0.0f64; 1 << width];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let mut key = 0usize;
            for &q in qubits {
                key = (key << 1) | self.bit(i, q);
            }
            probs[key] += amp.norm_sqr();
        }
        let dist = WeightedIndex::new(&probs).expect("normalized state has positive total weight");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let outcome = dist.sample(&mut rng);
            let key: String = (0..width)
                .map(|b| if outcome >> (width - 1 - b) & 1 == 1 { '1' } else { '0' })
                .collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        Ok(counts)
    }
}
