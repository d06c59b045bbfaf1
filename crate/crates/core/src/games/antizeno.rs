//! Anti-Zeno bomb tester as a unitary phase-kick model.
//!
//! The tested qubit starts in `|0⟩` and goes through `n` stages of
//! `V_α(π/2n)`, separated by `NOT³` (`n − 1` times). Because
//! `V_α(β₂)·NOT³·V_α(β₁) = V_α(β₁+β₂)` the damaged-bomb evolution collapses to
//! `V_α(π/2)`. A working bomb adds `e^{NOT·π/2n}` after every stage, a total
//! extra phase of `π/2` in the cumulative `e^{NOTφ}`. A final `NOT` precedes
//! the readout. No explosion events are modelled.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::gate::{tactic_coefficients, SingleQubitGate};
use crate::state::{GateOp, PureState};

use super::tester::{BombState, TesterLaw};

fn stages(n: u32, alpha: f64, bomb: BombState) -> Vec<GateOp> {
    let beta = PI / (2.0 * n as f64);
    let stage = SingleQubitGate::v(alpha, beta);
    let kick = SingleQubitGate::exp_not(beta);
    let not3 = SingleQubitGate::not().pow(3);
    let mut ops = Vec::with_capacity(3 * n as usize);
    for s in 0..n {
        if s > 0 {
            ops.push(GateOp::single(not3, 0));
        }
        ops.push(GateOp::single(stage, 0));
        if bomb.is_working() {
            ops.push(GateOp::single(kick, 0));
        }
    }
    ops.push(GateOp::single(SingleQubitGate::not(), 0));
    ops
}

/// Exact verdict law of the anti-Zeno tester. For `α = 0` a damaged bomb gives
/// verdict 1 and a working bomb verdict 0, both surely.
pub fn run_bomb_tester_antizeno(n: u32, alpha: f64, bomb: BombState) -> Result<TesterLaw> {
    if n < 1 {
        return Err(invalid("n", "must be >= 1"));
    }
    if !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    let mut state = PureState::zero(1)?;
    state.apply_all(&stages(n, alpha, bomb))?;
    Ok(TesterLaw {
        exploded: vec![0.0; n as usize],
        verdict: [state.probability(0, 0)?, state.probability(0, 1)?],
    })
}

/// Whether `g` equals some `e^{NOT·φ}` up to a global phase.
///
/// Expands `g` over `{I, NOT, H·NOT·H, NOT·H·NOT·H}`; membership requires the
/// last two coefficients to vanish and the first two to share a phase.
pub fn in_exp_not_class(g: &SingleQubitGate, tol: f64) -> bool {
    let [a, b, d, e] = tactic_coefficients(g);
    d.norm() <= tol && e.norm() <= tol && (a * b.conj()).im.abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn alpha_zero_verdicts_are_complementary() {
        let damaged = run_bomb_tester_antizeno(4, 0.0, BombState::Damaged).unwrap();
        assert!((damaged.verdict[1] - 1.0).abs() < 1e-12);
        let working = run_bomb_tester_antizeno(4, 0.0, BombState::Working).unwrap();
        assert!((working.verdict[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn para_zeno_phase_level() {
        let law = run_bomb_tester_antizeno(4, PI / 3.0, BombState::Damaged).unwrap();
        assert!((law.verdict[1] - 1.0).abs() < 1e-12);
        assert!(run_bomb_tester_antizeno(0, 0.0, BombState::Damaged).is_err());
    }

    #[test]
    fn class_membership() {
        for beta in [0.1, 0.7, 2.5] {
            assert!(in_exp_not_class(&SingleQubitGate::v(0.0, beta), 1e-10));
        }
        assert!(!in_exp_not_class(
            &SingleQubitGate::v(FRAC_PI_2, PI / 4.0),
            1e-10
        ));
        assert!(in_exp_not_class(&SingleQubitGate::not().pow(3), 1e-10));
        // a global phase must not matter
        let phased = SingleQubitGate::exp_not(0.4)
            .scale_complex(num_complex::Complex64::from_polar(1.0, 0.9));
        assert!(in_exp_not_class(&phased, 1e-10));
        assert!(!in_exp_not_class(&SingleQubitGate::hadamard(), 1e-10));
    }
}
