use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{StateVector, NORM_TOLERANCE};

/// Smallest amplitude magnitude accepted for a generic secret.
pub const GENERIC_MIN_AMPLITUDE: f64 = 0.05;

/// The two-qubit state `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` being shared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSecret")]
pub struct SecretState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

#[derive(Deserialize)]
struct RawSecret {
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
}

impl TryFrom<RawSecret> for SecretState {
    type Error = Error;

    fn try_from(r: RawSecret) -> Result<Self> {
        SecretState::new(r.alpha, r.beta, r.gamma, r.delta)
    }
}

impl SecretState {
    /// Rejects amplitudes whose squared magnitudes do not sum to 1.
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let secret = SecretState {
            alpha,
            beta,
            gamma,
            delta,
        };
        let norm = secret.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(secret)
    }

    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        Self::new(amps[0], amps[1], amps[2], amps[3])
    }

    /// `|00⟩`.
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        SecretState {
            alpha: Complex64::new(1.0, 0.0),
            beta: z,
            gamma: z,
            delta: z,
        }
    }

    /// Four standard complex Gaussians, normalized; redrawn until every
    /// amplitude has magnitude at least [`GENERIC_MIN_AMPLITUDE`].
    pub fn random_generic<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut amps = [Complex64::new(0.0, 0.0); 4];
            for a in &mut amps {
                *a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            amps.iter_mut().for_each(|a| *a /= norm);
            if amps.iter().all(|a| a.norm() >= GENERIC_MIN_AMPLITUDE) {
                return SecretState {
                    alpha: amps[0],
                    beta: amps[1],
                    gamma: amps[2],
                    delta: amps[3],
                };
            }
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn to_state(&self) -> StateVector {
        StateVector::new(2, self.amplitudes().to_vec()).expect("secret is normalized")
    }
}
