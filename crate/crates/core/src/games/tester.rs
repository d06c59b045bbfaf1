//! Round-based testers built on gradual unblocking.
//!
//! Each tester repeats a stage `n` times: rotate the strategy qubit by a small
//! tactic, then (for a live probe) couple it to a fresh detector qubit and
//! measure the detector. A detector reading of 1 stops the game ("explosion").
//! After the last round a final tactic is applied and the strategy qubit is
//! read out as the verdict.
//!
//! | tester          | stage tactic   | coupling            | final |
//! |-----------------|----------------|---------------------|-------|
//! | EV breaker      | `ⁿ√NOT` on q2  | Toffoli(q1, q2 → a) | NOT   |
//! | Zeno bomb       | `ⁿ√NOT` on q   | CNOT(q → bomb)      | NOT   |
//! | supply-demand   | `exp(πH/2n)`   | CNOT(q → bomb)      | H     |

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::gate::SingleQubitGate;
use crate::rng::RngStream;
use crate::state::{GateOp, PureState};
use crate::stats::Estimate;

use super::tally;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BombState {
    Working,
    Damaged,
}

impl BombState {
    pub fn from_working(working: bool) -> Self {
        if working {
            Self::Working
        } else {
            Self::Damaged
        }
    }

    pub fn is_working(self) -> bool {
        self == Self::Working
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TesterOutcome {
    /// Stopped by a detector click in round `at_round` (1-based).
    Exploded {
        at_round: u32,
    },
    Verdict(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TesterResult {
    pub outcome: TesterOutcome,
    pub rounds_completed: u32,
}

/// Exact outcome law of a tester.
#[derive(Debug, Clone, PartialEq)]
pub struct TesterLaw {
    /// `exploded[r]` is the probability of stopping in round `r + 1`.
    pub exploded: Vec<f64>,
    pub verdict: [f64; 2],
}

impl TesterLaw {
    pub fn explosion(&self) -> f64 {
        self.exploded.iter().sum()
    }

    pub fn survival(&self) -> f64 {
        self.verdict[0] + self.verdict[1]
    }

    /// The single outcome carrying all but `tol` of the probability, if any.
    pub fn deterministic_result(&self, tol: f64) -> Option<TesterResult> {
        let rounds = self.exploded.len() as u32;
        if let Some(b) = (0..2u8).find(|&b| self.verdict[b as usize] >= 1.0 - tol) {
            return Some(TesterResult {
                outcome: TesterOutcome::Verdict(b),
                rounds_completed: rounds,
            });
        }
        self.exploded
            .iter()
            .position(|&p| p >= 1.0 - tol)
            .map(|r| TesterResult {
                outcome: TesterOutcome::Exploded {
                    at_round: r as u32 + 1,
                },
                rounds_completed: r as u32,
            })
    }
}

/// Aggregated Monte Carlo runs of a tester.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TesterTally {
    pub trials: u64,
    pub exploded: u64,
    pub verdict: [u64; 2],
}

impl TesterTally {
    pub fn survival(&self) -> Estimate {
        Estimate::proportion(self.trials - self.exploded, self.trials)
    }

    /// Fraction of all trials that ended with verdict 1.
    pub fn verdict_one(&self) -> Estimate {
        Estimate::proportion(self.verdict[1], self.trials)
    }
}

/// Runs `trials` independent plays of `runner`, trial `t` on `base.fork(t)`.
pub fn tally_tester<F>(trials: u64, base: &RngStream, runner: F) -> Result<TesterTally>
where
    F: Fn(&mut RngStream) -> Result<TesterResult> + Sync + Send,
{
    if trials < 1 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let [exploded, v0, v1] = tally::<3, _>(trials, base, |r| {
        Ok(match runner(r)?.outcome {
            TesterOutcome::Exploded { .. } => 0,
            TesterOutcome::Verdict(b) => 1 + b as usize,
        })
    })?;
    Ok(TesterTally {
        trials,
        exploded,
        verdict: [v0, v1],
    })
}

struct RoundCircuit {
    initial: PureState,
    stage: Vec<GateOp>,
    /// Detector measured after each stage; `None` when nothing listens.
    probe: Option<usize>,
    finale: Vec<GateOp>,
    readout: usize,
    rounds: u32,
}

impl RoundCircuit {
    fn sample(&self, rng: &mut RngStream) -> Result<TesterResult> {
        let mut state = self.initial.clone();
        for round in 1..=self.rounds {
            state.apply_all(&self.stage)?;
            if let Some(probe) = self.probe {
                if state.measure(probe, rng)? == 1 {
                    return Ok(TesterResult {
                        outcome: TesterOutcome::Exploded { at_round: round },
                        rounds_completed: round - 1,
                    });
                }
            }
        }
        state.apply_all(&self.finale)?;
        Ok(TesterResult {
            outcome: TesterOutcome::Verdict(state.measure(self.readout, rng)?),
            rounds_completed: self.rounds,
        })
    }

    /// Branch enumeration: follow the no-click branch, booking click mass per
    /// round.
    fn law(&self) -> Result<TesterLaw> {
        let mut state = self.initial.clone();
        let mut alive = 1.0;
        let mut exploded = vec![0.0; self.rounds as usize];
        for slot in exploded.iter_mut() {
            state.apply_all(&self.stage)?;
            if let Some(probe) = self.probe {
                let click = state.probability(probe, 1)?;
                *slot = alive * click;
                if 1.0 - click < crate::state::RENORM_THRESHOLD {
                    return Ok(TesterLaw {
                        exploded,
                        verdict: [0.0, 0.0],
                    });
                }
                alive *= state.project(probe, 0)?;
            }
        }
        state.apply_all(&self.finale)?;
        let verdict = [
            alive * state.probability(self.readout, 0)?,
            alive * state.probability(self.readout, 1)?,
        ];
        Ok(TesterLaw { exploded, verdict })
    }
}

fn check_rounds(n: u32) -> Result<()> {
    if n < 1 {
        Err(invalid("n", "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_bit(name: &'static str, b: u8) -> Result<()> {
    if b > 1 {
        Err(invalid(name, "must be 0 or 1"))
    } else {
        Ok(())
    }
}

// Elitzur–Vaidman breaker layout.
const EV_FIRST: usize = 0;
const EV_SWITCH: usize = 1;
const EV_ANCILLA: usize = 2;

fn ev_breaker_circuit(n: u32, first_qubit: u8) -> Result<RoundCircuit> {
    check_rounds(n)?;
    check_bit("first_qubit", first_qubit)?;
    Ok(RoundCircuit {
        initial: PureState::basis(3, first_qubit as usize)?,
        stage: vec![
            GateOp::single(SingleQubitGate::root_not(n), EV_SWITCH),
            GateOp::toffoli(EV_FIRST, EV_SWITCH, EV_ANCILLA),
        ],
        probe: Some(EV_ANCILLA),
        finale: vec![GateOp::single(SingleQubitGate::not(), EV_SWITCH)],
        readout: EV_SWITCH,
        rounds: n,
    })
}

/// One play of the Elitzur–Vaidman circuit-breaker.
///
/// `first_qubit = 0` never explodes and always gives verdict 0;
/// `first_qubit = 1` survives all `n` rounds with probability `cos²ⁿ(π/2n)`
/// and then gives verdict 1.
pub fn run_ev_breaker(n: u32, first_qubit: u8, rng: &mut RngStream) -> Result<TesterResult> {
    ev_breaker_circuit(n, first_qubit)?.sample(rng)
}

pub fn ev_breaker_law(n: u32, first_qubit: u8) -> Result<TesterLaw> {
    ev_breaker_circuit(n, first_qubit)?.law()
}

const TESTED: usize = 0;
const BOMB: usize = 1;

fn bomb_circuit(
    stage_gate: SingleQubitGate,
    final_gate: SingleQubitGate,
    n: u32,
    bomb: BombState,
) -> Result<RoundCircuit> {
    let mut stage = vec![GateOp::single(stage_gate, TESTED)];
    if bomb.is_working() {
        stage.push(GateOp::cnot(TESTED, BOMB));
    }
    Ok(RoundCircuit {
        initial: PureState::zero(2)?,
        stage,
        probe: bomb.is_working().then_some(BOMB),
        finale: vec![GateOp::single(final_gate, TESTED)],
        readout: TESTED,
        rounds: n,
    })
}

fn zeno_circuit(n: u32, bomb: BombState) -> Result<RoundCircuit> {
    check_rounds(n)?;
    bomb_circuit(
        SingleQubitGate::root_not(n),
        SingleQubitGate::not(),
        n,
        bomb,
    )
}

fn supply_demand_circuit(n: u32, bomb: BombState) -> Result<RoundCircuit> {
    check_rounds(n)?;
    let stage = SingleQubitGate::exp_h(PI / (2.0 * n as f64));
    bomb_circuit(stage, SingleQubitGate::hadamard(), n, bomb)
}

/// Safe bomb tester: a damaged bomb gives verdict 0, a working one explodes
/// with probability `1 − cos²ⁿ(π/2n)` and otherwise gives verdict 1.
pub fn run_bomb_tester_zeno(n: u32, bomb: BombState, rng: &mut RngStream) -> Result<TesterResult> {
    zeno_circuit(n, bomb)?.sample(rng)
}

pub fn bomb_tester_zeno_law(n: u32, bomb: BombState) -> Result<TesterLaw> {
    zeno_circuit(n, bomb)?.law()
}

/// Supply-demand switch. A working bomb survives each stage with probability
/// `1 − ½·sin²(π/2n)`; survivors end in `|0⟩` and the final `H` makes the
/// verdict a fair coin. A damaged bomb gives verdict 0.
pub fn run_supply_demand(n: u32, bomb: BombState, rng: &mut RngStream) -> Result<TesterResult> {
    supply_demand_circuit(n, bomb)?.sample(rng)
}

pub fn supply_demand_law(n: u32, bomb: BombState) -> Result<TesterLaw> {
    supply_demand_circuit(n, bomb)?.law()
}

/// `cos²ⁿ(π/2n)`.
pub fn zeno_survival(n: u32) -> Result<f64> {
    check_rounds(n)?;
    let c = (PI / (2.0 * n as f64)).cos();
    Ok(c.powi(2 * n as i32))
}

/// `(1 − ½·sin²(π/2n))ⁿ`.
pub fn supply_demand_survival(n: u32) -> Result<f64> {
    check_rounds(n)?;
    let s = (PI / (2.0 * n as f64)).sin();
    Ok((1.0 - 0.5 * s * s).powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!(zeno_survival(1).unwrap() < 1e-30);
        assert!((zeno_survival(2).unwrap() - 0.25).abs() < 1e-15);
        assert!((supply_demand_survival(1).unwrap() - 0.5).abs() < 1e-15);
        assert!((supply_demand_survival(2).unwrap() - 0.5625).abs() < 1e-15);
        assert!(zeno_survival(0).is_err());
        assert!(supply_demand_survival(0).is_err());
    }

    #[test]
    fn ev_breaker_contracts() {
        for n in [1, 2, 5, 10] {
            let off = ev_breaker_law(n, 0).unwrap();
            assert!(off.explosion().abs() < 1e-12);
            assert!((off.verdict[0] - 1.0).abs() < 1e-12);
            let on = ev_breaker_law(n, 1).unwrap();
            assert!((on.verdict[1] - zeno_survival(n).unwrap()).abs() < 1e-12);
            assert!(on.verdict[0].abs() < 1e-12);
        }
        let one = ev_breaker_law(1, 1).unwrap();
        assert_eq!(
            one.deterministic_result(1e-12),
            Some(TesterResult {
                outcome: TesterOutcome::Exploded { at_round: 1 },
                rounds_completed: 0
            })
        );
        assert!(ev_breaker_law(3, 2).is_err());
    }

    #[test]
    fn ev_breaker_sampling_is_consistent() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..50 {
            let r = run_ev_breaker(6, 0, &mut rng).unwrap();
            assert_eq!(r.outcome, TesterOutcome::Verdict(0));
            assert_eq!(r.rounds_completed, 6);
        }
        let r = run_ev_breaker(1, 1, &mut rng).unwrap();
        assert_eq!(r.outcome, TesterOutcome::Exploded { at_round: 1 });
    }

    #[test]
    fn zeno_tester_contracts() {
        let damaged = bomb_tester_zeno_law(4, BombState::Damaged).unwrap();
        assert!((damaged.verdict[0] - 1.0).abs() < 1e-12);
        let working = bomb_tester_zeno_law(4, BombState::Working).unwrap();
        let expect = 1.0 - (PI / 8.0).cos().powi(8);
        assert!((working.explosion() - expect).abs() < 1e-12);
        assert!((expect - 0.469_209_957).abs() < 1e-8);
        assert!((working.verdict[1] - (1.0 - expect)).abs() < 1e-12);
        let big = bomb_tester_zeno_law(4096, BombState::Working).unwrap();
        assert!(big.explosion() < 7e-4);
    }

    #[test]
    fn supply_demand_contracts() {
        let w1 = supply_demand_law(1, BombState::Working).unwrap();
        assert!((w1.survival() - 0.5).abs() < 1e-12);
        let w2 = supply_demand_law(2, BombState::Working).unwrap();
        assert!((w2.survival() - 0.5625).abs() < 1e-12);
        assert!((w2.verdict[0] - w2.verdict[1]).abs() < 1e-12);
        let d2 = supply_demand_law(2, BombState::Damaged).unwrap();
        assert!((d2.verdict[0] - 1.0).abs() < 1e-12);
    }
}
