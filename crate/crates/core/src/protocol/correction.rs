//! Receiver-side Pauli corrections.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bases::Sign;
use crate::error::{Error, Result};
use crate::statevec::{QubitIndex, SingleQubitOp, StateVector};

/// One of the four local repair operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    /// Identity.
    U0,
    /// σz
    U1,
    /// σx
    U2,
    /// iσy
    U3,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::U0, PauliOp::U1, PauliOp::U2, PauliOp::U3];

    pub fn operator(self) -> SingleQubitOp {
        match self {
            PauliOp::U0 => SingleQubitOp::identity(),
            PauliOp::U1 => SingleQubitOp::pauli_z(),
            PauliOp::U2 => SingleQubitOp::pauli_x(),
            PauliOp::U3 => SingleQubitOp::i_pauli_y(),
        }
    }

    /// Bit value picks σx, sign picks σz: `(0,+)→U0, (0,-)→U1, (1,+)→U2, (1,-)→U3`.
    pub fn from_value_and_sign(v: u8, s: Sign) -> PauliOp {
        match (v & 1, s) {
            (0, Sign::Plus) => PauliOp::U0,
            (0, Sign::Minus) => PauliOp::U1,
            (_, Sign::Plus) => PauliOp::U2,
            (_, Sign::Minus) => PauliOp::U3,
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `U_first ⊗ U_second` on the receiver's `(b_N, d_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PauliCorrection {
    pub first: PauliOp,
    pub second: PauliOp,
}

impl PauliCorrection {
    pub fn new(first: PauliOp, second: PauliOp) -> Self {
        PauliCorrection { first, second }
    }

    /// All 16 candidate pairs.
    pub fn all() -> impl Iterator<Item = PauliCorrection> {
        PauliOp::ALL
            .into_iter()
            .flat_map(|first| PauliOp::ALL.into_iter().map(move |second| PauliCorrection { first, second }))
    }
}

impl fmt::Display for PauliCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.first, self.second)
    }
}

/// Correction from the published values and the parity-adjusted signs
/// `s1 = P1·(-1)^t`, `s2 = P2·(-1)^q`.
pub fn correction_for(v1: u8, v2: u8, s1: Sign, s2: Sign) -> PauliCorrection {
    PauliCorrection {
        first: PauliOp::from_value_and_sign(v1, s1),
        second: PauliOp::from_value_and_sign(v2, s2),
    }
}

/// Applies `correction` to a two-qubit `(b_N, d_N)` state.
pub fn charlie_reconstruct(state: &StateVector, correction: PauliCorrection) -> Result<StateVector> {
    if state.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.n_qubits(),
        });
    }
    state
        .apply_single(QubitIndex(0), &correction.first.operator())?
        .apply_single(QubitIndex(1), &correction.second.operator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::fidelity_up_to_phase;
    use num_complex::Complex64;
    use PauliOp::*;
    use Sign::{Minus as M, Plus as P};

    #[test]
    fn spot_rows() {
        assert_eq!(correction_for(0, 0, P, P), PauliCorrection::new(U0, U0));
        assert_eq!(correction_for(1, 1, M, M), PauliCorrection::new(U3, U3));
        assert_eq!(correction_for(0, 1, M, P), PauliCorrection::new(U1, U2));
    }

    #[test]
    fn all_candidates_distinct() {
        let all: std::collections::BTreeSet<_> = PauliCorrection::all().collect();
        assert_eq!(all.len(), 16);
    }

    fn secret_amps() -> [Complex64; 4] {
        [
            Complex64::new(0.1, 0.3),
            Complex64::new(-0.4, 0.2),
            Complex64::new(0.5, -0.1),
            Complex64::new(0.2, 0.6),
        ]
    }

    fn state(pairs: &[(usize, f64, usize)]) -> StateVector {
        // (basis index, sign, amplitude slot)
        let a = secret_amps();
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        for &(idx, sign, slot) in pairs {
            amps[idx] = a[slot] * sign;
        }
        StateVector::new_normalized(2, amps).unwrap()
    }

    #[test]
    fn reconstruct_examples() {
        let secret = state(&[(0, 1.0, 0), (1, 1.0, 1), (2, 1.0, 2), (3, 1.0, 3)]);
        // α|00⟩ − β|01⟩ − γ|10⟩ + δ|11⟩ with U1⊗U1
        let branch = state(&[(0, 1.0, 0), (1, -1.0, 1), (2, -1.0, 2), (3, 1.0, 3)]);
        let fixed = charlie_reconstruct(&branch, PauliCorrection::new(U1, U1)).unwrap();
        assert!((fidelity_up_to_phase(&fixed, &secret).unwrap() - 1.0).abs() < 1e-12);
        // α|10⟩ + β|11⟩ − γ|00⟩ − δ|01⟩ with U3⊗U0
        let branch = state(&[(2, 1.0, 0), (3, 1.0, 1), (0, -1.0, 2), (1, -1.0, 3)]);
        let fixed = charlie_reconstruct(&branch, PauliCorrection::new(U3, U0)).unwrap();
        assert!((fidelity_up_to_phase(&fixed, &secret).unwrap() - 1.0).abs() < 1e-12);
        for (a, b) in fixed.amplitudes().iter().zip(secret.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let same = charlie_reconstruct(&secret, PauliCorrection::new(U0, U0)).unwrap();
        assert_eq!(same, secret);
    }

    #[test]
    fn reconstruct_rejects_wrong_size() {
        let three = StateVector::basis_state(3, 0).unwrap();
        assert_eq!(
            charlie_reconstruct(&three, PauliCorrection::new(U0, U0)).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 3 }
        );
    }
}
