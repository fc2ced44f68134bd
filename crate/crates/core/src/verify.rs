//! Verification harness: exhaustive branch enumeration, a brute-force
//! correction oracle that never consults the correction rule, the
//! correction-table check over many secrets, and Monte Carlo sampling.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bases::{ghz_basis_family, GhzOutcome, Sign, XOutcome};
use crate::error::{Error, Result};
use crate::protocol::{
    charlie_reconstruct, run_from, AliceMeasurement, Limits, PauliCorrection, ProtocolSession, ProtocolTranscript,
    SampledSelector, SecretState,
};
use crate::statevec::{StateVector, NORM_TOLERANCE, ZERO_PROBABILITY};

pub use crate::statevec::fidelity_up_to_phase;

/// Reconstruction counts as exact when fidelity is at least `1 - FIDELITY_TOLERANCE`.
pub const FIDELITY_TOLERANCE: f64 = NORM_TOLERANCE;
/// Branch probabilities must sum to 1 within this.
pub const PROBABILITY_MASS_TOLERANCE: f64 = 1e-9;
/// Chi-square p-values at or below this fail the uniformity sanity check.
pub const CHI_SQUARE_P_THRESHOLD: f64 = 0.001;
/// Chi-square tests with fewer expected counts per cell are reported but not enforced.
pub const CHI_SQUARE_MIN_EXPECTED: f64 = 5.0;

/// One fully measured branch, checked against the oracle.
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub transcript: ProtocolTranscript,
    pub oracle_corrections: Vec<PauliCorrection>,
    pub table_correction: PauliCorrection,
    pub agree: bool,
}

/// Every candidate `U_i ⊗ U_j` that maps `post_state` back to the secret
/// up to global phase, in sorted order.
pub fn brute_force_correction_oracle(post_state: &StateVector, secret: &SecretState) -> Result<Vec<PauliCorrection>> {
    if post_state.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: post_state.n_qubits(),
        });
    }
    let target = secret.to_state();
    let mut found = Vec::new();
    for candidate in PauliCorrection::all() {
        let repaired = charlie_reconstruct(post_state, candidate)?;
        if fidelity_up_to_phase(&target, &repaired)? >= 1.0 - FIDELITY_TOLERANCE {
            found.push(candidate);
        }
    }
    found.sort();
    Ok(found)
}

/// `2^(2N+2) · 4^(N-1)`.
pub fn branch_count(n_agents: usize) -> u128 {
    let n = n_agents as u32;
    (1u128 << (2 * n + 2)) * 4u128.pow(n.saturating_sub(1))
}

/// Distinct `(M1, M2, t mod 2, q mod 2)` combinations: `2^(2N+2) · 4`.
/// The receiver's correction depends on the branch only through these.
pub fn correction_class_count(n_agents: usize) -> u128 {
    (1u128 << (2 * n_agents as u32 + 2)) * 4
}

fn check_caps(n_agents: usize, limits: &Limits) -> Result<()> {
    let qubits = 2 + 4 * n_agents;
    if qubits > limits.qubit_cap {
        return Err(Error::QubitCapExceeded {
            requested: qubits,
            cap: limits.qubit_cap,
        });
    }
    let branches = branch_count(n_agents);
    if branches > limits.branch_cap as u128 {
        return Err(Error::BranchCapExceeded {
            requested: branches,
            cap: limits.branch_cap,
        });
    }
    Ok(())
}

/// Visits every nonzero-probability branch in a fixed order: M1 outcomes in
/// GHZ family order, then M2, then controllers `1..N-1` with sign pairs
/// `(+,+), (+,-), (-,+), (-,-)`.
pub fn for_each_branch<F>(secret: &SecretState, n_agents: usize, limits: &Limits, mut visit: F) -> Result<()>
where
    F: FnMut(BranchReport),
{
    if n_agents < 2 {
        return Err(Error::TooFewAgents { n_agents });
    }
    check_caps(n_agents, limits)?;
    let root = ProtocolSession::new(*secret, n_agents, limits)?;
    for (first, p1) in root.alice_outcomes(AliceMeasurement::First)? {
        if p1 < ZERO_PROBABILITY {
            continue;
        }
        let (_, after_first) = root.alice_measure_outcome(AliceMeasurement::First, &first)?;
        for (second, p2) in after_first.alice_outcomes(AliceMeasurement::Second)? {
            if p2 < ZERO_PROBABILITY {
                continue;
            }
            let (_, after_second) = after_first.alice_measure_outcome(AliceMeasurement::Second, &second)?;
            descend_controllers(&after_second, 1, &mut visit)?;
        }
    }
    Ok(())
}

fn descend_controllers<F>(session: &ProtocolSession, next: usize, visit: &mut F) -> Result<()>
where
    F: FnMut(BranchReport),
{
    if next == session.n_agents() {
        visit(branch_report(session)?);
        return Ok(());
    }
    for b in Sign::ALL {
        for d in Sign::ALL {
            match session.controller_measure_outcome(next, XOutcome(b), XOutcome(d)) {
                Ok((_, child)) => descend_controllers(&child, next + 1, visit)?,
                Err(Error::ZeroProbabilityBranch { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

fn branch_report(session: &ProtocolSession) -> Result<BranchReport> {
    let oracle_corrections = brute_force_correction_oracle(session.state(), session.secret())?;
    let transcript = session.finish()?;
    let table_correction = transcript.correction;
    let agree = oracle_corrections.contains(&table_correction);
    Ok(BranchReport {
        transcript,
        oracle_corrections,
        table_correction,
        agree,
    })
}

/// All branch reports, in [`for_each_branch`] order.
pub fn enumerate_branches(secret: &SecretState, n_agents: usize, limits: &Limits) -> Result<Vec<BranchReport>> {
    let mut reports = Vec::new();
    for_each_branch(secret, n_agents, limits, |r| reports.push(r))?;
    Ok(reports)
}

/// Aggregate view of one exhaustive enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct EnumerationSummary {
    pub n_agents: usize,
    pub branches: usize,
    pub total_probability: f64,
    pub min_fidelity: f64,
    pub disagreements: usize,
    pub passed: bool,
}

impl EnumerationSummary {
    pub fn from_reports(n_agents: usize, reports: &[BranchReport]) -> Self {
        let total_probability = reports.iter().map(|r| r.transcript.branch_probability).sum::<f64>();
        let min_fidelity = reports
            .iter()
            .map(|r| r.transcript.final_fidelity)
            .fold(f64::INFINITY, f64::min);
        let disagreements = reports.iter().filter(|r| !r.agree).count();
        let passed = !reports.is_empty()
            && (total_probability - 1.0).abs() <= PROBABILITY_MASS_TOLERANCE
            && min_fidelity >= 1.0 - FIDELITY_TOLERANCE
            && disagreements == 0;
        EnumerationSummary {
            n_agents,
            branches: reports.len(),
            total_probability,
            min_fidelity,
            disagreements,
            passed,
        }
    }
}

/// Correction class `(V1, V2, s1, s2)` with `s = P·(-1)^parity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CorrectionClass {
    pub v1: u8,
    pub v2: u8,
    pub s1: Sign,
    pub s2: Sign,
}

impl CorrectionClass {
    pub fn of(transcript: &ProtocolTranscript) -> Self {
        CorrectionClass {
            v1: transcript.alice_outcome_1.v_value(),
            v2: transcript.alice_outcome_2.v_value(),
            s1: transcript.alice_outcome_1.p_value() * Sign::from_parity(transcript.t),
            s2: transcript.alice_outcome_2.p_value() * Sign::from_parity(transcript.q),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub class: CorrectionClass,
    pub table_correction: PauliCorrection,
    /// Oracle sets seen for this class across all secrets and branches.
    pub oracle_corrections: Vec<Vec<PauliCorrection>>,
    pub occurrences: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableFailure {
    pub secret_index: usize,
    pub alice_outcome_1: GhzOutcome,
    pub alice_outcome_2: GhzOutcome,
    pub table_correction: PauliCorrection,
    pub oracle_corrections: Vec<PauliCorrection>,
    pub final_fidelity: f64,
}

/// Result of checking the correction rule against the oracle over many
/// generic secrets at two agents.
#[derive(Debug, Clone, Serialize)]
pub struct TableSummary {
    pub n_secrets: usize,
    pub seed: u64,
    pub branches: usize,
    pub agreements: usize,
    pub failures: Vec<TableFailure>,
    /// Branches whose oracle set had more than one element.
    pub non_unique_oracle_sets: usize,
    pub min_fidelity: f64,
    pub max_probability_mass_error: f64,
    pub classes: Vec<ClassSummary>,
    pub passed: bool,
}

pub const TABLE_AGENTS: usize = 2;

/// Draws `n_secrets` generic secrets from `seed`.
pub fn generic_secrets(n_secrets: usize, seed: u64) -> Vec<SecretState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_secrets).map(|_| SecretState::random_generic(&mut rng)).collect()
}

/// Enumerates all 256 two-agent branches for each of `n_secrets` seeded
/// generic secrets and compares the rule's correction with the oracle.
pub fn verify_table(n_secrets: usize, seed: u64) -> Result<TableSummary> {
    let limits = Limits::default();
    let mut branches = 0;
    let mut agreements = 0;
    let mut failures = Vec::new();
    let mut non_unique = 0;
    let mut min_fidelity = f64::INFINITY;
    let mut max_mass_error: f64 = 0.0;
    let mut classes: BTreeMap<CorrectionClass, ClassSummary> = BTreeMap::new();

    for (secret_index, secret) in generic_secrets(n_secrets, seed).iter().enumerate() {
        let mut mass = 0.0;
        for_each_branch(secret, TABLE_AGENTS, &limits, |report| {
            branches += 1;
            mass += report.transcript.branch_probability;
            min_fidelity = min_fidelity.min(report.transcript.final_fidelity);
            if report.oracle_corrections.len() != 1 {
                non_unique += 1;
            }
            if report.agree {
                agreements += 1;
            } else {
                failures.push(TableFailure {
                    secret_index,
                    alice_outcome_1: report.transcript.alice_outcome_1.clone(),
                    alice_outcome_2: report.transcript.alice_outcome_2.clone(),
                    table_correction: report.table_correction,
                    oracle_corrections: report.oracle_corrections.clone(),
                    final_fidelity: report.transcript.final_fidelity,
                });
            }
            let class = CorrectionClass::of(&report.transcript);
            let entry = classes.entry(class).or_insert_with(|| ClassSummary {
                class,
                table_correction: report.table_correction,
                oracle_corrections: Vec::new(),
                occurrences: 0,
                agree: true,
            });
            entry.occurrences += 1;
            entry.agree &= report.agree && entry.table_correction == report.table_correction;
            if !entry.oracle_corrections.contains(&report.oracle_corrections) {
                entry.oracle_corrections.push(report.oracle_corrections);
            }
        })?;
        max_mass_error = max_mass_error.max((mass - 1.0).abs());
    }

    let passed = failures.is_empty()
        && branches > 0
        && max_mass_error <= PROBABILITY_MASS_TOLERANCE
        && min_fidelity >= 1.0 - FIDELITY_TOLERANCE;
    Ok(TableSummary {
        n_secrets,
        seed,
        branches,
        agreements,
        failures,
        non_unique_oracle_sets: non_unique,
        min_fidelity: if branches == 0 { 0.0 } else { min_fidelity },
        max_probability_mass_error: max_mass_error,
        classes: classes.into_values().collect(),
        passed,
    })
}

/// Pearson chi-square of observed counts against a uniform distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub cells: usize,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// False when the expected count per cell is below
    /// [`CHI_SQUARE_MIN_EXPECTED`]; such tests do not gate the verdict.
    pub applicable: bool,
}

impl ChiSquareTest {
    pub fn uniform(counts: &[u64]) -> Self {
        let cells = counts.len();
        let total: u64 = counts.iter().sum();
        let expected = total as f64 / cells as f64;
        let statistic = if expected > 0.0 {
            counts
                .iter()
                .map(|&o| {
                    let diff = o as f64 - expected;
                    diff * diff / expected
                })
                .sum()
        } else {
            0.0
        };
        let degrees_of_freedom = cells.saturating_sub(1).max(1);
        let p_value = ChiSquared::new(degrees_of_freedom as f64)
            .map(|d| d.sf(statistic))
            .unwrap_or(f64::NAN);
        ChiSquareTest {
            cells,
            statistic,
            degrees_of_freedom,
            p_value,
            applicable: expected >= CHI_SQUARE_MIN_EXPECTED,
        }
    }

    pub fn passed(&self) -> bool {
        !self.applicable || self.p_value > CHI_SQUARE_P_THRESHOLD
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramBin {
    pub outcome: GhzOutcome,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloStats {
    pub n_agents: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    /// Trials whose fidelity fell below `1 - FIDELITY_TOLERANCE`.
    pub fidelity_failures: usize,
    /// Trials whose published-bit count differed from `2(N+1)`.
    pub message_failures: usize,
    pub first_measurement_histogram: Vec<HistogramBin>,
    pub second_measurement_histogram: Vec<HistogramBin>,
    pub first_measurement_chi_square: ChiSquareTest,
    pub second_measurement_chi_square: ChiSquareTest,
    /// Joint `(M1, M2)` outcome frequencies against `1/4^(N+1)`.
    pub pair_chi_square: ChiSquareTest,
    #[serde(skip)]
    pub pair_counts: Vec<u64>,
    pub passed: bool,
}

/// Runs `n_trials` protocol executions with outcomes sampled from the true
/// distribution. The initial state is built once and shared by every trial.
pub fn monte_carlo(
    secret: &SecretState,
    n_agents: usize,
    n_trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<MonteCarloStats> {
    let session = ProtocolSession::new(*secret, n_agents, limits)?;
    let family: Vec<GhzOutcome> = ghz_basis_family(n_agents)?.into_iter().map(|(o, _)| o).collect();
    let k = family.len();
    let mut first_counts = vec![0u64; k];
    let mut second_counts = vec![0u64; k];
    let mut pair_counts = vec![0u64; k * k];
    let mut selector = SampledSelector::new(seed);
    let order: Vec<usize> = (1..n_agents).collect();
    let mut fidelity_sum = 0.0;
    let mut min_fidelity = f64::INFINITY;
    let mut fidelity_failures = 0;
    let mut message_failures = 0;

    for _ in 0..n_trials {
        let t = run_from(&session, &order, &mut selector)?;
        let i = t.alice_outcome_1.family_index();
        let j = t.alice_outcome_2.family_index();
        first_counts[i] += 1;
        second_counts[j] += 1;
        pair_counts[i * k + j] += 1;
        fidelity_sum += t.final_fidelity;
        min_fidelity = min_fidelity.min(t.final_fidelity);
        if t.final_fidelity < 1.0 - FIDELITY_TOLERANCE {
            fidelity_failures += 1;
        }
        if t.alice_bits() != 4 || t.published_bits() != 2 * (n_agents + 1) {
            message_failures += 1;
        }
    }

    let histogram = |counts: &[u64]| {
        family
            .iter()
            .zip(counts)
            .map(|(o, &count)| HistogramBin {
                outcome: o.clone(),
                count,
            })
            .collect::<Vec<_>>()
    };
    let first_measurement_chi_square = ChiSquareTest::uniform(&first_counts);
    let second_measurement_chi_square = ChiSquareTest::uniform(&second_counts);
    let pair_chi_square = ChiSquareTest::uniform(&pair_counts);
    let passed = n_trials > 0
        && fidelity_failures == 0
        && message_failures == 0
        && first_measurement_chi_square.passed()
        && second_measurement_chi_square.passed()
        && pair_chi_square.passed();
    Ok(MonteCarloStats {
        n_agents,
        trials: n_trials,
        seed,
        mean_fidelity: if n_trials == 0 { 0.0 } else { fidelity_sum / n_trials as f64 },
        min_fidelity: if n_trials == 0 { 0.0 } else { min_fidelity },
        fidelity_failures,
        message_failures,
        first_measurement_histogram: histogram(&first_counts),
        second_measurement_histogram: histogram(&second_counts),
        first_measurement_chi_square,
        second_measurement_chi_square,
        pair_chi_square,
        pair_counts,
        passed,
    })
}
