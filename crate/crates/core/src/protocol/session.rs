//! The protocol engine.
//!
//! A [`ProtocolSession`] is an immutable snapshot of the protocol between
//! steps. Each measurement borrows the snapshot and returns a new one with
//! the measured particles removed, so exhaustive enumeration can branch
//! from any point without copying the parent state.

use serde::{Deserialize, Serialize};

use crate::bases::{ghz_basis_family, ghz_basis_vector, x_basis, GhzOutcome, Sign, XOutcome};
use crate::bases::BellKind;
use crate::error::{Error, Result};
use crate::statevec::{fidelity_up_to_phase, QubitIndex, StateVector};

use super::correction::{charlie_reconstruct, correction_for, PauliCorrection};
use super::registry::{Particle, ParticleRegistry};
use super::secret::SecretState;
use super::selector::{AliceMeasurement, MeasurementStep, OutcomeSelector};

/// 2^26 amplitudes is about 1 GiB.
pub const DEFAULT_QUBIT_CAP: usize = 26;
pub const DEFAULT_BRANCH_CAP: u64 = 1 << 16;

/// Resource limits shared by the engine and the verification harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub qubit_cap: usize,
    pub branch_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            qubit_cap: DEFAULT_QUBIT_CAP,
            branch_cap: DEFAULT_BRANCH_CAP,
        }
    }
}

/// Bits published over the classical channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub sender: String,
    pub payload_bits: Vec<u8>,
}

/// Controller i's two σx results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllerOutcome {
    pub controller: usize,
    pub b: XOutcome,
    pub d: XOutcome,
}

/// Complete record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub secret: SecretState,
    pub n_agents: usize,
    pub alice_outcome_1: GhzOutcome,
    pub alice_outcome_2: GhzOutcome,
    /// In the order the controllers measured.
    pub controller_outcomes: Vec<ControllerOutcome>,
    /// Number of `-x` results on the b side.
    pub t: usize,
    /// Number of `-x` results on the d side.
    pub q: usize,
    pub correction: PauliCorrection,
    pub messages: Vec<ClassicalMessage>,
    pub branch_probability: f64,
    pub final_fidelity: f64,
}

impl ProtocolTranscript {
    pub fn published_bits(&self) -> usize {
        self.messages.iter().map(|m| m.payload_bits.len()).sum()
    }

    pub fn alice_bits(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| m.sender == ALICE)
            .map(|m| m.payload_bits.len())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub qubits_used: usize,
    pub qubits_carrying_information: usize,
    pub ratio: f64,
}

const ALICE: &str = "alice";

fn controller_name(i: usize) -> String {
    format!("bob_{i}")
}

/// `|Φ⟩_xy ⊗ ∏ φ+_{a_i b_i} ⊗ ∏ φ+_{c_i d_i}` in registry order.
pub fn build_initial_state(
    secret: &SecretState,
    n_agents: usize,
    limits: &Limits,
) -> Result<(StateVector, ParticleRegistry)> {
    let registry = ParticleRegistry::new(n_agents)?;
    if registry.n_qubits() > limits.qubit_cap {
        return Err(Error::QubitCapExceeded {
            requested: registry.n_qubits(),
            cap: limits.qubit_cap,
        });
    }
    let epr = crate::bases::bell_state(BellKind::PhiPlus);
    let state = (0..2 * n_agents).fold(secret.to_state(), |acc, _| acc.tensor(&epr));
    Ok((state, registry))
}

#[derive(Debug, Clone)]
pub struct ProtocolSession {
    secret: SecretState,
    registry: ParticleRegistry,
    state: StateVector,
    live: Vec<Particle>,
    alice: [Option<GhzOutcome>; 2],
    controllers: Vec<ControllerOutcome>,
    probability: f64,
}

impl ProtocolSession {
    pub fn new(secret: SecretState, n_agents: usize, limits: &Limits) -> Result<Self> {
        let (state, registry) = build_initial_state(&secret, n_agents, limits)?;
        Ok(ProtocolSession {
            secret,
            live: registry.particles().to_vec(),
            registry,
            state,
            alice: [None, None],
            controllers: Vec::new(),
            probability: 1.0,
        })
    }

    pub fn secret(&self) -> &SecretState {
        &self.secret
    }

    pub fn registry(&self) -> &ParticleRegistry {
        &self.registry
    }

    pub fn n_agents(&self) -> usize {
        self.registry.n_agents()
    }

    /// Current state of the unmeasured particles.
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Unmeasured particles, in qubit order of [`ProtocolSession::state`].
    pub fn live_particles(&self) -> &[Particle] {
        &self.live
    }

    /// Product of the probabilities of all outcomes so far.
    pub fn branch_probability(&self) -> f64 {
        self.probability
    }

    pub fn alice_outcome(&self, which: AliceMeasurement) -> Option<&GhzOutcome> {
        self.alice[which.slot()].as_ref()
    }

    pub fn controller_outcomes(&self) -> &[ControllerOutcome] {
        &self.controllers
    }

    fn positions(&self, particles: &[Particle]) -> Result<Vec<QubitIndex>> {
        positions_in(&self.live, particles)
    }

    fn alice_group(&self, which: AliceMeasurement) -> Result<Vec<Particle>> {
        match which {
            AliceMeasurement::First if self.alice[0].is_some() => {
                Err(Error::OutOfOrder("first joint measurement already done".into()))
            }
            AliceMeasurement::Second if self.alice[0].is_none() => Err(Error::OutOfOrder(
                "second joint measurement requested before the first".into(),
            )),
            AliceMeasurement::Second if self.alice[1].is_some() => {
                Err(Error::OutOfOrder("second joint measurement already done".into()))
            }
            AliceMeasurement::First => Ok(self.registry.first_measurement_group()),
            AliceMeasurement::Second => Ok(self.registry.second_measurement_group()),
        }
    }

    /// Outcome distribution of one of Alice's joint measurements, in GHZ
    /// family order.
    pub fn alice_outcomes(&self, which: AliceMeasurement) -> Result<Vec<(GhzOutcome, f64)>> {
        let group = self.alice_group(which)?;
        let qubits = self.positions(&group)?;
        let (outcomes, vectors): (Vec<_>, Vec<_>) = ghz_basis_family(self.n_agents())?.into_iter().unzip();
        let probabilities = self.state.outcome_probabilities(&qubits, &vectors)?;
        Ok(outcomes.into_iter().zip(probabilities).collect())
    }

    /// Projects Alice's particles onto `outcome`, returning its probability
    /// and the post-measurement session.
    pub fn alice_measure_outcome(&self, which: AliceMeasurement, outcome: &GhzOutcome) -> Result<(f64, Self)> {
        let group = self.alice_group(which)?;
        if outcome.n_qubits() != group.len() {
            return Err(Error::DimensionMismatch {
                expected: group.len(),
                got: outcome.n_qubits(),
            });
        }
        let qubits = self.positions(&group)?;
        let projection = self.state.project_subset(&qubits, &ghz_basis_vector(outcome))?;
        let post = projection.post_state.ok_or(Error::ZeroProbabilityBranch {
            index: outcome.family_index(),
        })?;
        let mut next = ProtocolSession {
            secret: self.secret,
            registry: self.registry.clone(),
            state: post,
            live: without(&self.live, &group),
            alice: self.alice.clone(),
            controllers: self.controllers.clone(),
            probability: self.probability * projection.probability,
        };
        next.alice[which.slot()] = Some(outcome.clone());
        Ok((projection.probability, next))
    }

    /// Alice's joint measurement with the outcome chosen by `selector`.
    pub fn alice_measure(
        &self,
        which: AliceMeasurement,
        selector: &mut dyn OutcomeSelector,
    ) -> Result<(GhzOutcome, f64, Self)> {
        let outcomes = self.alice_outcomes(which)?;
        let probabilities: Vec<f64> = outcomes.iter().map(|(_, p)| *p).collect();
        let index = checked_choice(selector, MeasurementStep::Alice(which), &probabilities)?;
        let outcome = outcomes[index].0.clone();
        let (p, next) = self.alice_measure_outcome(which, &outcome)?;
        Ok((outcome, p, next))
    }

    fn check_controller(&self, index: usize) -> Result<()> {
        let max = self.n_agents() - 1;
        if index == 0 || index > max {
            return Err(Error::ControllerOutOfRange { index, max });
        }
        if self.alice.iter().any(Option::is_none) {
            return Err(Error::OutOfOrder(format!(
                "controller {index} measured before both joint measurements"
            )));
        }
        if self.controllers.iter().any(|c| c.controller == index) {
            return Err(Error::ControllerAlreadyMeasured(index));
        }
        Ok(())
    }

    fn with_controller(&self, record: ControllerOutcome, probability: f64, state: StateVector, live: Vec<Particle>) -> Self {
        let mut controllers = self.controllers.clone();
        controllers.push(record);
        ProtocolSession {
            secret: self.secret,
            registry: self.registry.clone(),
            state,
            live,
            alice: self.alice.clone(),
            controllers,
            probability: self.probability * probability,
        }
    }

    /// Controller `index` measures `b_i` then `d_i` along x with the given
    /// results. Returns the joint probability of the pair.
    pub fn controller_measure_outcome(&self, index: usize, b: XOutcome, d: XOutcome) -> Result<(f64, Self)> {
        self.check_controller(index)?;
        let (pb, state_b, live_b) = project_x(&self.state, &self.live, Particle::B(index), b)?;
        let (pd, state_d, live_d) = project_x(&state_b, &live_b, Particle::D(index), d)?;
        let probability = pb * pd;
        let record = ControllerOutcome { controller: index, b, d };
        Ok((probability, self.with_controller(record, probability, state_d, live_d)))
    }

    /// Controller `index` measures with outcomes chosen by `selector`.
    pub fn controller_measure(
        &self,
        index: usize,
        selector: &mut dyn OutcomeSelector,
    ) -> Result<((XOutcome, XOutcome), f64, Self)> {
        self.check_controller(index)?;
        let probs_b = x_probabilities(&self.state, &self.live, Particle::B(index))?;
        let b = XOutcome(Sign::from_bit(
            checked_choice(selector, MeasurementStep::ControllerB(index), &probs_b)? as u8,
        ));
        let (pb, state_b, live_b) = project_x(&self.state, &self.live, Particle::B(index), b)?;
        let probs_d = x_probabilities(&state_b, &live_b, Particle::D(index))?;
        let d = XOutcome(Sign::from_bit(
            checked_choice(selector, MeasurementStep::ControllerD(index), &probs_d)? as u8,
        ));
        let (pd, state_d, live_d) = project_x(&state_b, &live_b, Particle::D(index), d)?;
        let probability = pb * pd;
        let record = ControllerOutcome { controller: index, b, d };
        Ok(((b, d), probability, self.with_controller(record, probability, state_d, live_d)))
    }

    /// True once Alice and all `N-1` controllers have measured.
    pub fn is_complete(&self) -> bool {
        self.alice.iter().all(Option::is_some) && self.controllers.len() == self.n_agents() - 1
    }

    /// Parities `(t, q)`: counts of `-x` among b-side and d-side results.
    pub fn parities(&self) -> (usize, usize) {
        let t = self.controllers.iter().filter(|c| c.b.sign() == Sign::Minus).count();
        let q = self.controllers.iter().filter(|c| c.d.sign() == Sign::Minus).count();
        (t, q)
    }

    /// Correction the receiver derives from the published information.
    pub fn correction(&self) -> Result<PauliCorrection> {
        let (first, second) = match &self.alice {
            [Some(a), Some(b)] => (a, b),
            _ => return Err(Error::OutOfOrder("correction requested before both joint measurements".into())),
        };
        let (t, q) = self.parities();
        Ok(correction_for(
            first.v_value(),
            second.v_value(),
            first.p_value() * Sign::from_parity(t),
            second.p_value() * Sign::from_parity(q),
        ))
    }

    /// Applies the receiver's correction and returns the transcript together
    /// with the reconstructed `(b_N, d_N)` state.
    pub fn finish_with_state(&self) -> Result<(ProtocolTranscript, StateVector)> {
        if !self.is_complete() {
            return Err(Error::OutOfOrder(format!(
                "{} of {} controllers measured",
                self.controllers.len(),
                self.n_agents() - 1
            )));
        }
        debug_assert_eq!(self.live, self.registry.receiver_pair());
        let correction = self.correction()?;
        let reconstructed = charlie_reconstruct(&self.state, correction)?;
        let final_fidelity = fidelity_up_to_phase(&self.secret.to_state(), &reconstructed)?;
        let (t, q) = self.parities();
        let first = self.alice[0].clone().expect("complete");
        let second = self.alice[1].clone().expect("complete");

        let mut messages = vec![
            ClassicalMessage {
                sender: ALICE.into(),
                payload_bits: vec![first.v_value(), first.p_value().bit()],
            },
            ClassicalMessage {
                sender: ALICE.into(),
                payload_bits: vec![second.v_value(), second.p_value().bit()],
            },
        ];
        messages.extend(self.controllers.iter().map(|c| ClassicalMessage {
            sender: controller_name(c.controller),
            payload_bits: vec![c.b.sign().bit(), c.d.sign().bit()],
        }));

        let transcript = ProtocolTranscript {
            secret: self.secret,
            n_agents: self.n_agents(),
            alice_outcome_1: first,
            alice_outcome_2: second,
            controller_outcomes: self.controllers.clone(),
            t,
            q,
            correction,
            messages,
            branch_probability: self.probability,
            final_fidelity,
        };
        Ok((transcript, reconstructed))
    }

    pub fn finish(&self) -> Result<ProtocolTranscript> {
        self.finish_with_state().map(|(t, _)| t)
    }
}

fn positions_in(live: &[Particle], particles: &[Particle]) -> Result<Vec<QubitIndex>> {
    particles
        .iter()
        .map(|p| {
            live.iter()
                .position(|l| l == p)
                .map(QubitIndex)
                .ok_or_else(|| Error::OutOfOrder(format!("particle {p} was already measured")))
        })
        .collect()
}

fn without(live: &[Particle], measured: &[Particle]) -> Vec<Particle> {
    live.iter().copied().filter(|p| !measured.contains(p)).collect()
}

fn x_probabilities(state: &StateVector, live: &[Particle], particle: Particle) -> Result<Vec<f64>> {
    let qubits = positions_in(live, &[particle])?;
    let vectors: Vec<StateVector> = x_basis().into_iter().map(|(_, v)| v).collect();
    state.outcome_probabilities(&qubits, &vectors)
}

fn project_x(
    state: &StateVector,
    live: &[Particle],
    particle: Particle,
    outcome: XOutcome,
) -> Result<(f64, StateVector, Vec<Particle>)> {
    let qubits = positions_in(live, &[particle])?;
    let vector = &x_basis()[outcome.index()].1;
    let projection = state.project_subset(&qubits, vector)?;
    let post = projection.post_state.ok_or(Error::ZeroProbabilityBranch {
        index: outcome.index(),
    })?;
    Ok((projection.probability, post, without(live, &[particle])))
}

fn checked_choice(selector: &mut dyn OutcomeSelector, step: MeasurementStep, probabilities: &[f64]) -> Result<usize> {
    let index = selector.select(step, probabilities)?;
    match probabilities.get(index) {
        None => Err(Error::SelectorOutOfRange {
            index,
            count: probabilities.len(),
        }),
        Some(&p) if p < crate::statevec::ZERO_PROBABILITY => Err(Error::ZeroProbabilityBranch { index }),
        Some(_) => Ok(index),
    }
}

/// Runs the whole protocol with controllers measuring in index order.
pub fn run_protocol(
    secret: &SecretState,
    n_agents: usize,
    selector: &mut dyn OutcomeSelector,
    limits: &Limits,
) -> Result<ProtocolTranscript> {
    let order: Vec<usize> = (1..n_agents).collect();
    run_protocol_with_order(secret, n_agents, &order, selector, limits)
}

/// Runs the protocol with the controllers measuring in `controller_order`.
pub fn run_protocol_with_order(
    secret: &SecretState,
    n_agents: usize,
    controller_order: &[usize],
    selector: &mut dyn OutcomeSelector,
    limits: &Limits,
) -> Result<ProtocolTranscript> {
    let session = ProtocolSession::new(*secret, n_agents, limits)?;
    run_from(&session, controller_order, selector)
}

/// Continues a fresh session to completion. Lets callers reuse one initial
/// state across many runs.
pub fn run_from(
    session: &ProtocolSession,
    controller_order: &[usize],
    selector: &mut dyn OutcomeSelector,
) -> Result<ProtocolTranscript> {
    let (_, _, s) = session.alice_measure(AliceMeasurement::First, selector)?;
    let (_, _, mut s) = s.alice_measure(AliceMeasurement::Second, selector)?;
    for &i in controller_order {
        s = s.controller_measure(i, selector)?.2;
    }
    s.finish()
}

/// Every distributed EPR qubit is consumed: Alice's `2N` are measured,
/// the controllers measure `2(N-1)` and the receiver keeps 2.
pub fn efficiency_report(transcript: &ProtocolTranscript) -> EfficiencyReport {
    let qubits_used = 4 * transcript.n_agents;
    let alice = transcript.alice_outcome_1.label_bits().len() + transcript.alice_outcome_2.label_bits().len();
    let controllers = 2 * transcript.controller_outcomes.len();
    let receiver = 2;
    let carrying = alice + controllers + receiver;
    EfficiencyReport {
        qubits_used,
        qubits_carrying_information: carrying,
        ratio: carrying as f64 / qubits_used as f64,
    }
}
