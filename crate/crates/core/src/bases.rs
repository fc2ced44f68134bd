//! Measurement bases used by the protocol: computational, σx eigenbasis,
//! Bell states and the generalized GHZ family
//! `|G_{b±}⟩ = (|0 b⟩ ± |1 b̄⟩)/√2`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// A ± sign. Published as bit 0 for `+` and bit 1 for `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Sign {
        if bit & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-1)^count`.
    pub fn from_parity(count: usize) -> Sign {
        Sign::from_bit((count & 1) as u8)
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Outcome of a GHZ-basis joint measurement on `label_bits.len() + 1` qubits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGhzOutcome")]
pub struct GhzOutcome {
    label_bits: Vec<u8>,
    sign: Sign,
}

#[derive(Deserialize)]
struct RawGhzOutcome {
    label_bits: Vec<u8>,
    sign: Sign,
}

impl TryFrom<RawGhzOutcome> for GhzOutcome {
    type Error = Error;

    fn try_from(raw: RawGhzOutcome) -> Result<Self> {
        GhzOutcome::new(raw.label_bits, raw.sign)
    }
}

impl GhzOutcome {
    /// Bits must be 0 or 1 and there must be at least one.
    pub fn new(label_bits: Vec<u8>, sign: Sign) -> Result<Self> {
        if label_bits.is_empty() {
            return Err(Error::EmptyLabel);
        }
        if label_bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBasis(format!("label bits {label_bits:?} are not binary")));
        }
        Ok(GhzOutcome { label_bits, sign })
    }

    pub fn label_bits(&self) -> &[u8] {
        &self.label_bits
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Number of qubits the outcome's basis vector spans.
    pub fn n_qubits(&self) -> usize {
        self.label_bits.len() + 1
    }

    /// V: the last label bit.
    pub fn v_value(&self) -> u8 {
        *self.label_bits.last().expect("label is never empty")
    }

    /// P: the sign.
    pub fn p_value(&self) -> Sign {
        self.sign
    }

    /// Position in [`ghz_basis_family`] order.
    pub fn family_index(&self) -> usize {
        let label = self.label_bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        label << 1 | self.sign.bit() as usize
    }

    fn from_family_index(n_label_bits: usize, index: usize) -> Self {
        let label = index >> 1;
        let label_bits = (0..n_label_bits)
            .map(|j| (label >> (n_label_bits - 1 - j) & 1) as u8)
            .collect();
        GhzOutcome {
            label_bits,
            sign: Sign::from_bit((index & 1) as u8),
        }
    }
}

impl fmt::Display for GhzOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("G")?;
        for b in &self.label_bits {
            write!(f, "{b}")?;
        }
        write!(f, "{}", self.sign)
    }
}

/// Outcome of a single-qubit σx measurement: `|+x⟩` or `|-x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XOutcome(pub Sign);

impl XOutcome {
    pub fn sign(self) -> Sign {
        self.0
    }

    pub fn index(self) -> usize {
        self.0.bit() as usize
    }
}

impl fmt::Display for XOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

/// Bell states, taken from the one-label-bit GHZ family:
/// φ± = G_{0±}, ψ± = G_{1±}.
pub fn bell_state(kind: BellKind) -> StateVector {
    let (bit, sign) = match kind {
        BellKind::PhiPlus => (0, Sign::Plus),
        BellKind::PhiMinus => (0, Sign::Minus),
        BellKind::PsiPlus => (1, Sign::Plus),
        BellKind::PsiMinus => (1, Sign::Minus),
    };
    ghz_basis_vector(&GhzOutcome {
        label_bits: vec![bit],
        sign,
    })
}

/// `(|0 b⟩ ± |1 b̄⟩)/√2` for the outcome's label `b`.
pub fn ghz_basis_vector(outcome: &GhzOutcome) -> StateVector {
    let n = outcome.n_qubits();
    let label = outcome.label_bits.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
    let all_label = (1usize << (n - 1)) - 1;
    let first = label;
    let second = (1 << (n - 1)) | (!label & all_label);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    amplitudes[first] = Complex64::new(h, 0.0);
    amplitudes[second] = Complex64::new(h * outcome.sign.factor(), 0.0);
    StateVector::new(n, amplitudes).expect("GHZ vectors are normalized")
}

/// All `2^(n_label_bits+1)` GHZ outcomes with their vectors, labels in
/// lexicographic order and `+` before `-` within each label.
pub fn ghz_basis_family(n_label_bits: usize) -> Result<Vec<(GhzOutcome, StateVector)>> {
    if n_label_bits == 0 {
        return Err(Error::EmptyLabel);
    }
    Ok((0..1usize << (n_label_bits + 1))
        .map(|index| {
            let outcome = GhzOutcome::from_family_index(n_label_bits, index);
            let vector = ghz_basis_vector(&outcome);
            (outcome, vector)
        })
        .collect())
}

/// `[(+, |+x⟩), (-, |-x⟩)]`.
pub fn x_basis() -> Vec<(XOutcome, StateVector)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Sign::ALL
        .iter()
        .map(|&s| {
            let v = StateVector::new(1, vec![Complex64::new(h, 0.0), Complex64::new(h * s.factor(), 0.0)])
                .expect("x eigenstates are normalized");
            (XOutcome(s), v)
        })
        .collect()
}

/// `|0⟩`, `|1⟩`.
pub fn computational_basis(n_qubits: usize) -> Vec<StateVector> {
    (0..1usize << n_qubits)
        .map(|i| StateVector::basis_state(n_qubits, i).expect("index in range"))
        .collect()
}

pub fn outcome_v(outcome: &GhzOutcome) -> u8 {
    outcome.v_value()
}

pub fn outcome_p(outcome: &GhzOutcome) -> Sign {
    outcome.p_value()
}
