//! The measuring circuit of the Newcomb game and its two breakers.
//!
//! Qubit 0 ("upper") holds the human tactic `|1/0⟩`; qubit 1 ("lower") starts
//! in `|0⟩` and is coupled to the upper qubit by an alliance (CNOT). Both are
//! measured at the end; a lower outcome of 0 means both boxes get opened.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::gate::{Amplitude, SingleQubitGate};
use crate::rng::RngStream;
use crate::state::{GateOp, PureState};

use super::tally;

pub const UPPER: usize = 0;
pub const LOWER: usize = 1;

/// Probability that the classical `I/NOT` switch fires when none is given.
pub const DEFAULT_PROB_NOT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakerKind {
    /// `NOT` on the lower qubit with probability `prob_not` before the alliance.
    ClassicalSwitch { prob_not: f64 },
    /// A Hadamard pair sandwiching the alliance on the lower qubit.
    Qutrojan,
}

impl BreakerKind {
    pub fn classical_switch(prob_not: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prob_not) {
            return Err(invalid("prob_not", "must lie in [0, 1]"));
        }
        Ok(Self::ClassicalSwitch { prob_not })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::ClassicalSwitch { prob_not } => Self::classical_switch(prob_not).map(|_| ()),
            Self::Qutrojan => Ok(()),
        }
    }
}

impl Default for BreakerKind {
    fn default() -> Self {
        Self::ClassicalSwitch {
            prob_not: DEFAULT_PROB_NOT,
        }
    }
}

/// Joint `(upper, lower)` outcome law, indexed `[upper][lower]`.
pub type JointLaw = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct NewcombReport {
    pub trials: u64,
    /// Observed counts, `[upper][lower]`.
    pub counts: [[u64; 2]; 2],
    pub exact: JointLaw,
}

impl NewcombReport {
    pub fn empirical(&self) -> JointLaw {
        self.counts
            .map(|row| row.map(|c| c as f64 / self.trials as f64))
    }
}

pub fn lower_marginal(law: &JointLaw) -> [f64; 2] {
    [law[0][0] + law[1][0], law[0][1] + law[1][1]]
}

pub fn upper_marginal(law: &JointLaw) -> [f64; 2] {
    [law[0][0] + law[0][1], law[1][0] + law[1][1]]
}

/// State just before the final measurements. `switch_fires` only matters for
/// the classical breaker.
fn prepared(tactic: [Amplitude; 2], breaker: BreakerKind, switch_fires: bool) -> Result<PureState> {
    let zero = [Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 0.0)];
    let mut state = PureState::product(&[tactic, zero])?;
    match breaker {
        BreakerKind::ClassicalSwitch { .. } => {
            if switch_fires {
                state.apply(&GateOp::single(SingleQubitGate::not(), LOWER))?;
            }
            state.apply(&GateOp::cnot(UPPER, LOWER))?;
        }
        BreakerKind::Qutrojan => {
            let h = GateOp::single(SingleQubitGate::hadamard(), LOWER);
            state.apply(&h)?;
            state.apply(&GateOp::cnot(UPPER, LOWER))?;
            state.apply(&h)?;
        }
    }
    Ok(state)
}

fn joint(state: &PureState) -> JointLaw {
    let d = state.distribution();
    // index = upper | lower << 1
    [[d[0b00], d[0b10]], [d[0b01], d[0b11]]]
}

/// Exact outcome law, mixing over the classical switch where present.
pub fn newcomb_exact(tactic: [Amplitude; 2], breaker: BreakerKind) -> Result<JointLaw> {
    breaker.validate()?;
    match breaker {
        BreakerKind::ClassicalSwitch { prob_not } => {
            let idle = joint(&prepared(tactic, breaker, false)?);
            let fired = joint(&prepared(tactic, breaker, true)?);
            let mut law = [[0.0; 2]; 2];
            for u in 0..2 {
                for l in 0..2 {
                    law[u][l] = (1.0 - prob_not) * idle[u][l] + prob_not * fired[u][l];
                }
            }
            Ok(law)
        }
        BreakerKind::Qutrojan => Ok(joint(&prepared(tactic, breaker, false)?)),
    }
}

/// Samples `trials` plays and reports the empirical and exact joint laws.
pub fn run_newcomb(
    tactic: [Amplitude; 2],
    breaker: BreakerKind,
    trials: u64,
    rng: &RngStream,
) -> Result<NewcombReport> {
    if trials < 1 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let exact = newcomb_exact(tactic, breaker)?;
    let buckets: [u64; 4] = tally(trials, rng, |r| {
        let fires = match breaker {
            BreakerKind::ClassicalSwitch { prob_not } => r.random::<f64>() < prob_not,
            BreakerKind::Qutrojan => false,
        };
        let mut state = prepared(tactic, breaker, fires)?;
        let upper = state.measure(UPPER, r)?;
        let lower = state.measure(LOWER, r)?;
        Ok((upper as usize) << 1 | lower as usize)
    })?;
    Ok(NewcombReport {
        trials,
        counts: [[buckets[0], buckets[1]], [buckets[2], buckets[3]]],
        exact,
    })
}
