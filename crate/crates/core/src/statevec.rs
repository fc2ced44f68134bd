//! Dense complex statevector over labeled qubits.
//!
//! Amplitude index bit ordering: qubit 0 is the most significant bit, so a
//! ket written left to right as `|q0 q1 ... q(n-1)⟩` maps to the binary
//! number with `q0` in the highest position. Every operation here is pure:
//! inputs are borrowed and results are fresh values.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Norm and probability tolerance.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Unitarity and norm-preservation tolerance for single-qubit operators.
pub const UNITARY_TOLERANCE: f64 = 1e-12;
/// Branches whose probability falls below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Position of a qubit in a state's declared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitIndex(pub usize);

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl From<usize> for QubitIndex {
    fn from(index: usize) -> Self {
        QubitIndex(index)
    }
}

/// A 2x2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitOp {
    matrix: [[Complex64; 2]; 2],
}

impl SingleQubitOp {
    /// Wraps `matrix` after checking `M M† = I` within [`UNITARY_TOLERANCE`].
    pub fn new(matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut deviation: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let acc: Complex64 = matrix[r].iter().zip(&matrix[c]).map(|(a, b)| a * b.conj()).sum();
                let target = if r == c { ONE } else { ZERO };
                deviation = deviation.max((acc - target).norm());
            }
        }
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(SingleQubitOp { matrix })
    }

    const fn real(m: [[f64; 2]; 2]) -> Self {
        SingleQubitOp {
            matrix: [
                [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
                [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
            ],
        }
    }

    pub const fn identity() -> Self {
        Self::real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub const fn pauli_x() -> Self {
        Self::real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub const fn pauli_y() -> Self {
        SingleQubitOp {
            matrix: [
                [ZERO, Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, 1.0), ZERO],
            ],
        }
    }

    pub const fn pauli_z() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// `i·σy = [[0, 1], [-1, 0]]`.
    pub const fn i_pauli_y() -> Self {
        Self::real([[0.0, 1.0], [-1.0, 0.0]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &SingleQubitOp) -> SingleQubitOp {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.matrix[r][0] * other.matrix[0][c] + self.matrix[r][1] * other.matrix[1][c];
            }
        }
        SingleQubitOp { matrix: out }
    }
}

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Result of projecting a subset of qubits onto one basis vector.
#[derive(Debug, Clone)]
pub struct Projection {
    pub probability: f64,
    /// Renormalized state of the unmeasured qubits, in their original
    /// relative order. `None` when the branch is impossible.
    pub post_state: Option<StateVector>,
}

impl StateVector {
    /// Validated constructor; rejects lists whose norm is not 1.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::build(n_qubits, amplitudes, false)
    }

    /// Like [`StateVector::new`] but rescales any nonzero vector to unit norm.
    pub fn new_normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::build(n_qubits, amplitudes, true)
    }

    /// `make_state` with an explicit auto-normalize flag.
    pub fn make_state(n_qubits: usize, amplitudes: Vec<Complex64>, auto_normalize: bool) -> Result<Self> {
        Self::build(n_qubits, amplitudes, auto_normalize)
    }

    fn build(n_qubits: usize, mut amplitudes: Vec<Complex64>, auto_normalize: bool) -> Result<Self> {
        let expected = dimension(n_qubits);
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                n_qubits,
                expected,
                got: amplitudes.len(),
            });
        }
        let norm = norm_of(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if auto_normalize {
            let scale = 1.0 / norm;
            amplitudes.iter_mut().for_each(|a| *a *= scale);
        } else if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = dimension(n_qubits);
        if index >= dim {
            return Err(Error::LengthMismatch {
                n_qubits,
                expected: dim,
                got: index + 1,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product; `self` occupies the leading (most significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// Applies `op` to qubit `q`, returning the new state.
    pub fn apply_single(&self, q: QubitIndex, op: &SingleQubitOp) -> Result<StateVector> {
        self.check_index(q)?;
        // Constructed ops are unitary; re-check in case the matrix was built by hand elsewhere.
        SingleQubitOp::new(op.matrix)?;
        let bit = 1usize << (self.n_qubits - 1 - q.0);
        let m = &op.matrix;
        let mut amplitudes = self.amplitudes.clone();
        for i in 0..amplitudes.len() {
            if i & bit != 0 {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | bit];
            amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
            amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// Reorders qubits: qubit `k` of the result is qubit `order[k]` of `self`.
    pub fn permute(&self, order: &[QubitIndex]) -> Result<StateVector> {
        if order.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: order.len(),
            });
        }
        self.check_subset(order)?;
        let n = self.n_qubits;
        let mut amplitudes = vec![ZERO; self.amplitudes.len()];
        for (new_index, slot) in amplitudes.iter_mut().enumerate() {
            let mut old_index = 0usize;
            for (k, q) in order.iter().enumerate() {
                if new_index >> (n - 1 - k) & 1 == 1 {
                    old_index |= 1 << (n - 1 - q.0);
                }
            }
            *slot = self.amplitudes[old_index];
        }
        Ok(StateVector { n_qubits: n, amplitudes })
    }

    /// Projects `qubits` (in the listed order) onto `basis_vector` and
    /// removes them from the state.
    pub fn project_subset(&self, qubits: &[QubitIndex], basis_vector: &StateVector) -> Result<Projection> {
        let (probability, residual) = self.project_raw(qubits, basis_vector, true)?;
        let post_state = match residual {
            Some(mut amplitudes) if probability >= ZERO_PROBABILITY => {
                let scale = 1.0 / probability.sqrt();
                amplitudes.iter_mut().for_each(|a| *a *= scale);
                Some(StateVector {
                    n_qubits: self.n_qubits - qubits.len(),
                    amplitudes,
                })
            }
            _ => None,
        };
        Ok(Projection {
            probability,
            post_state,
        })
    }

    /// Outcome probabilities of measuring `qubits` in `basis`, which must be
    /// a complete orthonormal basis of the subset's space.
    pub fn outcome_probabilities(&self, qubits: &[QubitIndex], basis: &[StateVector]) -> Result<Vec<f64>> {
        self.check_subset(qubits)?;
        check_complete_basis(qubits.len(), basis)?;
        let probabilities = basis
            .iter()
            .map(|v| self.project_raw(qubits, v, false).map(|(p, _)| p))
            .collect::<Result<Vec<_>>>()?;
        let total: f64 = probabilities.iter().sum();
        debug_assert!((total - 1.0).abs() < NORM_TOLERANCE, "probabilities sum to {total}");
        Ok(probabilities)
    }

    fn check_index(&self, q: QubitIndex) -> Result<()> {
        if q.0 >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q.0,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn check_subset(&self, qubits: &[QubitIndex]) -> Result<()> {
        let mut seen = vec![false; self.n_qubits];
        for &q in qubits {
            self.check_index(q)?;
            if std::mem::replace(&mut seen[q.0], true) {
                return Err(Error::DuplicateQubit(q.0));
            }
        }
        Ok(())
    }

    /// Unnormalized residual `(⟨v|_subset ⊗ I)|self⟩` and its squared norm.
    /// Only nonzero entries of the basis vector are visited, so sparse
    /// vectors such as GHZ states cost two lookups per residual amplitude.
    fn project_raw(
        &self,
        qubits: &[QubitIndex],
        basis_vector: &StateVector,
        keep_residual: bool,
    ) -> Result<(f64, Option<Vec<Complex64>>)> {
        self.check_subset(qubits)?;
        if basis_vector.n_qubits != qubits.len() {
            return Err(Error::DimensionMismatch {
                expected: qubits.len(),
                got: basis_vector.n_qubits,
            });
        }
        let n = self.n_qubits;
        let k = qubits.len();
        let mut mask = 0usize;
        for q in qubits {
            mask |= 1 << (n - 1 - q.0);
        }
        let terms: Vec<(usize, Complex64)> = basis_vector
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(s, c)| {
                let mut offset = 0usize;
                for (j, q) in qubits.iter().enumerate() {
                    if s >> (k - 1 - j) & 1 == 1 {
                        offset |= 1 << (n - 1 - q.0);
                    }
                }
                (offset, c.conj())
            })
            .collect();

        let rest = dimension(n - k);
        let mut residual = if keep_residual {
            Vec::with_capacity(rest)
        } else {
            Vec::new()
        };
        let mut probability = 0.0;
        let mut base = 0usize;
        for _ in 0..rest {
            let amp: Complex64 = terms.iter().map(|(off, c)| c * self.amplitudes[base | off]).sum();
            probability += amp.norm_sqr();
            if keep_residual {
                residual.push(amp);
            }
            // next index with all subset bits cleared
            base = ((base | mask) + 1) & !mask;
        }
        Ok((probability, keep_residual.then_some(residual)))
    }
}

/// `|⟨a|b⟩|²`, insensitive to a global phase on either argument.
pub fn fidelity_up_to_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Checks that `basis` holds `2^k` orthonormal `k`-qubit vectors within
/// [`NORM_TOLERANCE`].
pub fn check_complete_basis(k: usize, basis: &[StateVector]) -> Result<()> {
    let dim = dimension(k);
    if basis.len() != dim {
        return Err(Error::InvalidBasis(format!("{} vectors for a {dim}-dimensional space", basis.len())));
    }
    if let Some(v) = basis.iter().find(|v| v.n_qubits != k) {
        return Err(Error::InvalidBasis(format!("{}-qubit vector in a {k}-qubit basis", v.n_qubits)));
    }
    let supports: Vec<Vec<(usize, Complex64)>> = basis
        .iter()
        .map(|v| {
            v.amplitudes
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(|(i, c)| (i, *c))
                .collect()
        })
        .collect();
    for (i, a) in supports.iter().enumerate() {
        for (j, b) in supports.iter().enumerate().skip(i) {
            let overlap = sparse_inner(a, b);
            let target = if i == j { ONE } else { ZERO };
            if (overlap - target).norm() > NORM_TOLERANCE {
                return Err(Error::InvalidBasis(format!("⟨v{i}|v{j}⟩ = {overlap}")));
            }
        }
    }
    Ok(())
}

fn sparse_inner(a: &[(usize, Complex64)], b: &[(usize, Complex64)]) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = ZERO;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

fn norm_of(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn dimension(n_qubits: usize) -> usize {
    1usize << n_qubits
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus() -> StateVector {
        StateVector::new_normalized(1, vec![c(1.0), c(1.0)]).unwrap()
    }

    fn minus() -> StateVector {
        StateVector::new_normalized(1, vec![c(1.0), c(-1.0)]).unwrap()
    }

    fn assert_amps(state: &StateVector, expected: &[Complex64], tol: f64) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (i, (a, e)) in state.amplitudes().iter().zip(expected).enumerate() {
            assert!((a - e).norm() <= tol, "amplitude {i}: {a} vs {e}");
        }
    }

    #[test]
    fn make_state_examples() {
        let zero = StateVector::make_state(1, vec![c(1.0), c(0.0)], false).unwrap();
        assert_eq!(zero, StateVector::basis_state(1, 0).unwrap());

        let h = FRAC_1_SQRT_2;
        let phi_plus = StateVector::make_state(2, vec![c(h), c(0.0), c(0.0), c(h)], false).unwrap();
        assert!((phi_plus.norm() - 1.0).abs() < NORM_TOLERANCE);

        let plus = StateVector::make_state(1, vec![c(1.0), c(1.0)], true).unwrap();
        assert_amps(&plus, &[c(h), c(h)], 1e-15);
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(
            StateVector::new(2, vec![c(1.0), c(0.0)]),
            Err(Error::LengthMismatch { expected: 4, got: 2, .. })
        ));
        assert_eq!(StateVector::new_normalized(1, vec![c(0.0), c(0.0)]), Err(Error::ZeroVector));
        assert!(matches!(
            StateVector::new(1, vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(zero.tensor(&one), StateVector::basis_state(2, 0b01).unwrap());

        let h = FRAC_1_SQRT_2;
        let phi = StateVector::new(2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let both = phi.tensor(&phi);
        assert_eq!(both.n_qubits(), 4);
        for (i, a) in both.amplitudes().iter().enumerate() {
            let expected = if [0b0000, 0b0011, 0b1100, 0b1111].contains(&i) { 0.5 } else { 0.0 };
            assert!((a - c(expected)).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_single_examples() {
        let zz = StateVector::basis_state(2, 0).unwrap();
        let flipped = zz.apply_single(QubitIndex(0), &SingleQubitOp::pauli_x()).unwrap();
        assert_eq!(flipped, StateVector::basis_state(2, 0b10).unwrap());

        let out = plus().apply_single(QubitIndex(0), &SingleQubitOp::pauli_z()).unwrap();
        assert_amps(&out, minus().amplitudes(), 1e-15);

        let zero = StateVector::basis_state(1, 0).unwrap();
        let out = zero.apply_single(QubitIndex(0), &SingleQubitOp::i_pauli_y()).unwrap();
        assert_amps(&out, &[c(0.0), c(-1.0)], 0.0);
    }

    #[test]
    fn apply_single_errors() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        assert!(matches!(
            zero.apply_single(QubitIndex(1), &SingleQubitOp::pauli_x()),
            Err(Error::QubitOutOfRange { index: 1, n_qubits: 1 })
        ));
        assert!(matches!(
            SingleQubitOp::new([[c(1.0), c(1.0)], [c(0.0), c(1.0)]]),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn named_operators_are_unitary() {
        for op in [
            SingleQubitOp::identity(),
            SingleQubitOp::pauli_x(),
            SingleQubitOp::pauli_y(),
            SingleQubitOp::pauli_z(),
            SingleQubitOp::i_pauli_y(),
        ] {
            SingleQubitOp::new(*op.matrix()).unwrap();
        }
        // iσy = σz·σx
        assert_eq!(
            SingleQubitOp::pauli_z().compose(&SingleQubitOp::pauli_x()),
            SingleQubitOp::i_pauli_y()
        );
    }

    #[test]
    fn project_subset_examples() {
        let zz = StateVector::basis_state(2, 0).unwrap();
        let zero = StateVector::basis_state(1, 0).unwrap();
        let p = zz.project_subset(&[QubitIndex(0)], &zero).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-15);
        assert_eq!(p.post_state.unwrap(), zero);

        // |+x⟩|0⟩: the |0⟩ qubit onto |-x⟩ leaves |+x⟩ with probability 1/2
        let state = plus().tensor(&zero);
        let p = state.project_subset(&[QubitIndex(1)], &minus()).unwrap();
        assert!((p.probability - 0.5).abs() < 1e-12);
        assert_amps(&p.post_state.unwrap(), plus().amplitudes(), 1e-12);
        // while the |+x⟩ qubit never lands on |-x⟩
        let p = state.project_subset(&[QubitIndex(0)], &minus()).unwrap();
        assert!(p.probability < ZERO_PROBABILITY);
        assert!(p.post_state.is_none());
    }

    #[test]
    fn project_subset_impossible_branch_is_none() {
        let zz = StateVector::basis_state(2, 0).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        let p = zz.project_subset(&[QubitIndex(1)], &one).unwrap();
        assert_eq!(p.probability, 0.0);
        assert!(p.post_state.is_none());
    }

    #[test]
    fn project_subset_keeps_relative_order_of_remaining_qubits() {
        // |0⟩|1⟩|0⟩ with the middle qubit measured leaves |00⟩; measuring the
        // first leaves |10⟩.
        let s = StateVector::basis_state(3, 0b010).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        let zero = StateVector::basis_state(1, 0).unwrap();
        let mid = s.project_subset(&[QubitIndex(1)], &one).unwrap();
        assert_eq!(mid.post_state.unwrap(), StateVector::basis_state(2, 0).unwrap());
        let first = s.project_subset(&[QubitIndex(0)], &zero).unwrap();
        assert_eq!(first.post_state.unwrap(), StateVector::basis_state(2, 0b10).unwrap());
        // subset order matters: qubits (2, 1) onto |01⟩ means q2=0, q1=1
        let pair = s
            .project_subset(&[QubitIndex(2), QubitIndex(1)], &StateVector::basis_state(2, 0b01).unwrap())
            .unwrap();
        assert!((pair.probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn project_subset_errors() {
        let s = StateVector::basis_state(2, 0).unwrap();
        let zero = StateVector::basis_state(1, 0).unwrap();
        assert!(matches!(
            s.project_subset(&[QubitIndex(0), QubitIndex(1)], &zero),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        let zz = StateVector::basis_state(2, 0).unwrap();
        assert_eq!(
            s.project_subset(&[QubitIndex(1), QubitIndex(1)], &zz).unwrap_err(),
            Error::DuplicateQubit(1)
        );
    }

    #[test]
    fn outcome_probabilities_on_bell_marginal() {
        let h = FRAC_1_SQRT_2;
        let phi = StateVector::new(2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let comp = vec![StateVector::basis_state(1, 0).unwrap(), StateVector::basis_state(1, 1).unwrap()];
        let p = phi.outcome_probabilities(&[QubitIndex(1)], &comp).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn outcome_probabilities_rejects_bad_bases() {
        let s = StateVector::basis_state(1, 0).unwrap();
        let incomplete = vec![StateVector::basis_state(1, 0).unwrap()];
        assert!(matches!(
            s.outcome_probabilities(&[QubitIndex(0)], &incomplete),
            Err(Error::InvalidBasis(_))
        ));
        let repeated = vec![plus(), plus()];
        assert!(matches!(
            s.outcome_probabilities(&[QubitIndex(0)], &repeated),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn permute_reverses_qubits() {
        let s = StateVector::basis_state(3, 0b110).unwrap();
        let r = s.permute(&[QubitIndex(2), QubitIndex(1), QubitIndex(0)]).unwrap();
        assert_eq!(r, StateVector::basis_state(3, 0b011).unwrap());
        assert!(s.permute(&[QubitIndex(0), QubitIndex(0), QubitIndex(1)]).is_err());
    }
}
