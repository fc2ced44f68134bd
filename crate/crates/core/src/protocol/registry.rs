use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::statevec::QubitIndex;

/// A named particle. Agent indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Particle {
    /// First qubit of the secret.
    X,
    /// Second qubit of the secret.
    Y,
    /// Alice's half of the i-th b-side EPR pair.
    A(usize),
    /// Agent i's b-side qubit.
    B(usize),
    /// Alice's half of the i-th d-side EPR pair.
    C(usize),
    /// Agent i's d-side qubit.
    D(usize),
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Particle::X => f.write_str("x"),
            Particle::Y => f.write_str("y"),
            Particle::A(i) => write!(f, "a_{i}"),
            Particle::B(i) => write!(f, "b_{i}"),
            Particle::C(i) => write!(f, "c_{i}"),
            Particle::D(i) => write!(f, "d_{i}"),
        }
    }
}

impl Serialize for Particle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Maps particle names to qubit positions of the initial composite state.
///
/// Order: `x, y, a_1, b_1, …, a_N, b_N, c_1, d_1, …, c_N, d_N`, so every
/// EPR pair sits on adjacent qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleRegistry {
    n_agents: usize,
    order: Vec<Particle>,
}

impl ParticleRegistry {
    pub fn new(n_agents: usize) -> Result<Self> {
        if n_agents < 2 {
            return Err(Error::TooFewAgents { n_agents });
        }
        let mut order = Vec::with_capacity(2 + 4 * n_agents);
        order.extend([Particle::X, Particle::Y]);
        for i in 1..=n_agents {
            order.extend([Particle::A(i), Particle::B(i)]);
        }
        for i in 1..=n_agents {
            order.extend([Particle::C(i), Particle::D(i)]);
        }
        Ok(ParticleRegistry { n_agents, order })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_qubits(&self) -> usize {
        self.order.len()
    }

    pub fn particles(&self) -> &[Particle] {
        &self.order
    }

    pub fn index_of(&self, particle: Particle) -> Option<QubitIndex> {
        self.order.iter().position(|&p| p == particle).map(QubitIndex)
    }

    pub fn particle_at(&self, index: QubitIndex) -> Option<Particle> {
        self.order.get(index.0).copied()
    }

    /// Qubits of Alice's first joint measurement: `x, a_1, …, a_N`.
    pub fn first_measurement_group(&self) -> Vec<Particle> {
        std::iter::once(Particle::X).chain((1..=self.n_agents).map(Particle::A)).collect()
    }

    /// Qubits of Alice's second joint measurement: `y, c_1, …, c_N`.
    pub fn second_measurement_group(&self) -> Vec<Particle> {
        std::iter::once(Particle::Y).chain((1..=self.n_agents).map(Particle::C)).collect()
    }

    /// The receiver's pair `(b_N, d_N)`.
    pub fn receiver_pair(&self) -> [Particle; 2] {
        [Particle::B(self.n_agents), Particle::D(self.n_agents)]
    }
}
