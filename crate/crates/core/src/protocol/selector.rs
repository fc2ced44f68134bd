//! Strategies for choosing measurement outcomes.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bases::{GhzOutcome, XOutcome};
use crate::error::{Error, Result};

/// Alice's first (`x, a_1..a_N`) or second (`y, c_1..c_N`) joint measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AliceMeasurement {
    First,
    Second,
}

impl AliceMeasurement {
    pub fn from_number(which: u8) -> Option<Self> {
        match which {
            1 => Some(AliceMeasurement::First),
            2 => Some(AliceMeasurement::Second),
            _ => None,
        }
    }

    pub fn slot(self) -> usize {
        match self {
            AliceMeasurement::First => 0,
            AliceMeasurement::Second => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementStep {
    Alice(AliceMeasurement),
    /// σx on controller i's `b_i`.
    ControllerB(usize),
    /// σx on controller i's `d_i`.
    ControllerD(usize),
}

impl fmt::Display for MeasurementStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementStep::Alice(AliceMeasurement::First) => f.write_str("Alice M1"),
            MeasurementStep::Alice(AliceMeasurement::Second) => f.write_str("Alice M2"),
            MeasurementStep::ControllerB(i) => write!(f, "b_{i}"),
            MeasurementStep::ControllerD(i) => write!(f, "d_{i}"),
        }
    }
}

/// Picks an outcome index given the outcome distribution in basis order
/// (GHZ family order for Alice, `[+x, -x]` for controllers).
pub trait OutcomeSelector {
    fn select(&mut self, step: MeasurementStep, probabilities: &[f64]) -> Result<usize>;
}

/// Replays fixed outcomes.
#[derive(Debug, Clone, Default)]
pub struct ForcedSelector {
    alice: [Option<GhzOutcome>; 2],
    controllers: BTreeMap<usize, (XOutcome, XOutcome)>,
}

impl ForcedSelector {
    pub fn new(first: GhzOutcome, second: GhzOutcome) -> Self {
        ForcedSelector {
            alice: [Some(first), Some(second)],
            controllers: BTreeMap::new(),
        }
    }

    pub fn with_controller(mut self, index: usize, b: XOutcome, d: XOutcome) -> Self {
        self.controllers.insert(index, (b, d));
        self
    }
}

impl OutcomeSelector for ForcedSelector {
    fn select(&mut self, step: MeasurementStep, _probabilities: &[f64]) -> Result<usize> {
        let missing = || Error::NoForcedOutcome(step.to_string());
        match step {
            MeasurementStep::Alice(which) => self.alice[which.slot()]
                .as_ref()
                .map(GhzOutcome::family_index)
                .ok_or_else(missing),
            MeasurementStep::ControllerB(i) => self.controllers.get(&i).map(|(b, _)| b.index()).ok_or_else(missing),
            MeasurementStep::ControllerD(i) => self.controllers.get(&i).map(|(_, d)| d.index()).ok_or_else(missing),
        }
    }
}

/// Samples from the true outcome distribution with a seeded ChaCha stream.
#[derive(Debug, Clone)]
pub struct SampledSelector {
    rng: ChaCha8Rng,
}

impl SampledSelector {
    pub fn new(seed: u64) -> Self {
        SampledSelector {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        SampledSelector { rng }
    }
}

impl OutcomeSelector for SampledSelector {
    fn select(&mut self, _step: MeasurementStep, probabilities: &[f64]) -> Result<usize> {
        let u: f64 = self.rng.random();
        let total: f64 = probabilities.iter().sum();
        let target = u * total;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, &p) in probabilities.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            last_nonzero = i;
            acc += p;
            if target < acc {
                return Ok(i);
            }
        }
        // rounding left `target` just above the cumulative sum
        Ok(last_nonzero)
    }
}
