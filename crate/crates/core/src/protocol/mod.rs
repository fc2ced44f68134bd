//! Multiparty sharing of an arbitrary two-qubit state over `2N` EPR pairs.
//!
//! Alice holds the secret on `(x, y)` and half of every EPR pair. She makes
//! two GHZ-basis joint measurements, on `(x, a_1..a_N)` and on
//! `(y, c_1..c_N)`, and publishes `(V, P)` for each. Controllers
//! `1..N-1` measure `b_i` and `d_i` along x and publish the two signs.
//! The receiver (agent N) then holds `(b_N, d_N)` and applies
//! `U_first ⊗ U_second` chosen from `(V1, P1·(-1)^t)` and `(V2, P2·(-1)^q)`.

mod correction;
mod registry;
mod secret;
mod selector;
mod session;

pub use correction::{charlie_reconstruct, correction_for, PauliCorrection, PauliOp};
pub use registry::{Particle, ParticleRegistry};
pub use secret::{SecretState, GENERIC_MIN_AMPLITUDE};
pub use selector::{AliceMeasurement, ForcedSelector, MeasurementStep, OutcomeSelector, SampledSelector};
pub use session::{
    build_initial_state, efficiency_report, run_from, run_protocol, run_protocol_with_order, ClassicalMessage,
    ControllerOutcome, EfficiencyReport, Limits, ProtocolSession, ProtocolTranscript, DEFAULT_BRANCH_CAP,
    DEFAULT_QUBIT_CAP,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{GhzOutcome, Sign, XOutcome};
    use crate::error::Error;
    use crate::statevec::StateVector;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(bits: &[u8], sign: Sign) -> GhzOutcome {
        GhzOutcome::new(bits.to_vec(), sign).unwrap()
    }

    fn x(sign: Sign) -> XOutcome {
        XOutcome(sign)
    }

    fn secret(seed: u64) -> SecretState {
        SecretState::random_generic(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn session(n: usize, s: SecretState) -> ProtocolSession {
        ProtocolSession::new(s, n, &Limits::default()).unwrap()
    }

    #[test]
    fn initial_state_sizes() {
        let limits = Limits::default();
        let (state, reg) = build_initial_state(&secret(1), 2, &limits).unwrap();
        assert_eq!((state.n_qubits(), reg.n_qubits()), (10, 10));
        let (state, _) = build_initial_state(&secret(1), 3, &limits).unwrap();
        assert_eq!(state.n_qubits(), 14);
        assert!((state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn initial_state_for_zero_secret() {
        // x y a1 b1 a2 b2 c1 d1 c2 d2: secret bits 00, each pair 00 or 11
        let (state, _) = build_initial_state(&SecretState::zero(), 2, &Limits::default()).unwrap();
        let mut nonzero = 0;
        for (i, a) in state.amplitudes().iter().enumerate() {
            let pairs = [(7, 6), (5, 4), (3, 2), (1, 0)];
            let correlated = i >> 8 == 0 && pairs.iter().all(|&(hi, lo)| (i >> hi & 1) == (i >> lo & 1));
            if correlated {
                assert!((a - Complex64::new(0.25, 0.0)).norm() < 1e-15);
                nonzero += 1;
            } else {
                assert_eq!(a.norm(), 0.0);
            }
        }
        assert_eq!(nonzero, 16);
    }

    #[test]
    fn initial_state_errors() {
        let limits = Limits {
            qubit_cap: 12,
            ..Limits::default()
        };
        assert_eq!(
            build_initial_state(&secret(1), 3, &limits).unwrap_err(),
            Error::QubitCapExceeded { requested: 14, cap: 12 }
        );
        assert_eq!(
            build_initial_state(&secret(1), 1, &limits).unwrap_err(),
            Error::TooFewAgents { n_agents: 1 }
        );
    }

    #[test]
    fn alice_outcomes_uniform_at_two_agents() {
        let s = session(2, secret(4));
        let outcomes = s.alice_outcomes(AliceMeasurement::First).unwrap();
        assert_eq!(outcomes.len(), 8);
        for (_, p) in &outcomes {
            assert!((p - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn alice_measurements_must_be_ordered() {
        let s = session(2, secret(4));
        assert!(matches!(
            s.alice_outcomes(AliceMeasurement::Second),
            Err(Error::OutOfOrder(_))
        ));
        let (_, s1) = s.alice_measure_outcome(AliceMeasurement::First, &g(&[0, 0], Sign::Plus)).unwrap();
        assert!(matches!(
            s1.alice_measure_outcome(AliceMeasurement::First, &g(&[0, 0], Sign::Plus)),
            Err(Error::OutOfOrder(_))
        ));
        assert!(matches!(
            s1.controller_measure_outcome(1, x(Sign::Plus), x(Sign::Plus)),
            Err(Error::OutOfOrder(_))
        ));
        assert!(matches!(s1.finish(), Err(Error::OutOfOrder(_))));
    }

    #[test]
    fn controller_errors() {
        let s = session(3, secret(5));
        let (_, s) = s.alice_measure_outcome(AliceMeasurement::First, &g(&[0, 1, 1], Sign::Minus)).unwrap();
        let (_, s) = s.alice_measure_outcome(AliceMeasurement::Second, &g(&[1, 0, 0], Sign::Plus)).unwrap();
        assert_eq!(
            s.controller_measure_outcome(3, x(Sign::Plus), x(Sign::Plus)).unwrap_err(),
            Error::ControllerOutOfRange { index: 3, max: 2 }
        );
        assert_eq!(
            s.controller_measure_outcome(0, x(Sign::Plus), x(Sign::Plus)).unwrap_err(),
            Error::ControllerOutOfRange { index: 0, max: 2 }
        );
        let (_, s) = s.controller_measure_outcome(2, x(Sign::Minus), x(Sign::Plus)).unwrap();
        assert_eq!(
            s.controller_measure_outcome(2, x(Sign::Plus), x(Sign::Plus)).unwrap_err(),
            Error::ControllerAlreadyMeasured(2)
        );
        assert!(matches!(s.finish(), Err(Error::OutOfOrder(_))));
    }

    #[test]
    fn forced_branch_probability_and_fidelity() {
        let mut selector = ForcedSelector::new(g(&[0, 0], Sign::Plus), g(&[0, 0], Sign::Plus)).with_controller(
            1,
            x(Sign::Plus),
            x(Sign::Plus),
        );
        let t = run_protocol(&secret(8), 2, &mut selector, &Limits::default()).unwrap();
        assert!((t.branch_probability - 1.0 / 256.0).abs() < 1e-12);
        assert!((t.final_fidelity - 1.0).abs() < 1e-10);
        assert_eq!(t.correction, PauliCorrection::new(PauliOp::U0, PauliOp::U0));
        assert_eq!(t.alice_bits(), 4);
        assert_eq!(t.published_bits(), 6);
    }

    #[test]
    fn selector_out_of_range_is_an_error() {
        struct Always(usize);
        impl OutcomeSelector for Always {
            fn select(&mut self, _: MeasurementStep, _: &[f64]) -> crate::error::Result<usize> {
                Ok(self.0)
            }
        }
        let s = session(2, secret(2));
        assert_eq!(
            s.alice_measure(AliceMeasurement::First, &mut Always(99)).unwrap_err(),
            Error::SelectorOutOfRange { index: 99, count: 8 }
        );
    }

    #[test]
    fn messages_have_fixed_shape() {
        for n in 2..=4 {
            let mut sel = SampledSelector::new(n as u64);
            let t = run_protocol(&secret(3), n, &mut sel, &Limits::default()).unwrap();
            assert_eq!(t.messages.len(), 2 + (n - 1));
            assert!(t.messages.iter().all(|m| m.payload_bits.len() == 2));
            assert_eq!(t.alice_bits(), 4);
            assert_eq!(t.published_bits(), 2 * (n + 1));
            assert!((t.final_fidelity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn efficiency_examples() {
        for (n, used) in [(2, 8), (5, 20)] {
            let mut sel = SampledSelector::new(1);
            let t = run_protocol(&secret(6), n, &mut sel, &Limits::default()).unwrap();
            let e = efficiency_report(&t);
            assert_eq!((e.qubits_used, e.qubits_carrying_information), (used, used));
            assert_eq!(e.ratio, 1.0);
        }
    }

    #[test]
    fn transcript_round_trips_through_json() {
        let mut sel = SampledSelector::new(12);
        let t = run_protocol(&secret(12), 3, &mut sel, &Limits::default()).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: ProtocolTranscript = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in [
            "secret",
            "n_agents",
            "alice_outcome_1",
            "alice_outcome_2",
            "controller_outcomes",
            "t",
            "q",
            "correction",
            "messages",
            "branch_probability",
            "final_fidelity",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn receiver_state_before_correction_is_two_qubits() {
        let s = session(2, secret(9));
        let (_, s) = s.alice_measure_outcome(AliceMeasurement::First, &g(&[1, 1], Sign::Minus)).unwrap();
        let (_, s) = s.alice_measure_outcome(AliceMeasurement::Second, &g(&[0, 1], Sign::Plus)).unwrap();
        let (p, s) = s.controller_measure_outcome(1, x(Sign::Minus), x(Sign::Plus)).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
        assert_eq!(s.live_particles(), &[Particle::B(2), Particle::D(2)]);
        assert_eq!(s.state().n_qubits(), 2);
        let (t, fixed) = s.finish_with_state().unwrap();
        assert_eq!((t.t, t.q), (1, 0));
        // V1=1, P1=- times (-1)^1 = +; V2=1, P2=+
        assert_eq!(t.correction, PauliCorrection::new(PauliOp::U2, PauliOp::U2));
        let f = crate::statevec::fidelity_up_to_phase(&fixed, &StateVector::new(2, secret(9).amplitudes().to_vec()).unwrap())
            .unwrap();
        assert!((f - 1.0).abs() < 1e-10);
    }
}
