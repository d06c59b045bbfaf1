//! Metropolis dynamics of the cyclic 1D Ising chain as a cellular automaton.
//!
//! Each cell `k` sees its neighbours `s_{k−1}`, `s_{k+1}` and an `I/NOT`
//! switch that fires with probability `p`. The cell flips unless all three
//! spins are aligned and the switch fired:
//!
//! ```text
//! s_k' = ¬s_k ⊕ (switch ∧ [s_{k−1} = s_{k+1}] ∧ [s_k = s_{k+1}])
//! ```
//!
//! Flipping an aligned spin costs `ΔE = 4J`; every other flip has `ΔE ≤ 0`.
//! With `p = 1 − e^{−4βJ}` the rule is exactly Metropolis acceptance.
//!
//! In the quantum-cell form the switch is a qubit prepared by
//! `U = e^{NOT·θ}`, `sin²θ = p`, and the rule is the reversible circuit
//!
//! ```text
//! CNOT(k → left), CNOT(k → right), NOT(left), NOT(right),
//! C³NOT(switch, left, right → k), NOT(k)
//! ```
//!
//! followed by a measurement of the cell qubit. No classical random number
//! decides the switch; the Born rule does.
//!
//! Spins are stored as bits with `0 ↦ σ = +1` and `1 ↦ σ = −1`; the energy is
//! `E = −Σ σ_k σ_{k+1}` (J = 1).

use rand::Rng;

use crate::error::{invalid, Result};
use crate::gate::SingleQubitGate;
use crate::rng::RngStream;
use crate::state::{GateOp, PureState};
use crate::stats::{batch_means, Estimate};

/// Number of blocks used for batch-means error bars.
pub const BATCHES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsingChain {
    spins: Vec<u8>,
}

impl IsingChain {
    pub fn new(spins: Vec<u8>) -> Result<Self> {
        if spins.len() < 3 {
            return Err(invalid("n_cells", "a cyclic chain needs at least 3 cells"));
        }
        if spins.iter().any(|&s| s > 1) {
            return Err(invalid("spins", "spins are bits"));
        }
        Ok(Self { spins })
    }

    /// All spins up (`σ = +1`).
    pub fn aligned(n_cells: usize) -> Result<Self> {
        Self::new(vec![0; n_cells])
    }

    pub fn n_cells(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[u8] {
        &self.spins
    }

    pub fn neighbours(&self, k: usize) -> (u8, u8, u8) {
        let n = self.spins.len();
        (
            self.spins[(k + n - 1) % n],
            self.spins[k],
            self.spins[(k + 1) % n],
        )
    }

    /// Global spin flip.
    pub fn flipped(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| s ^ 1).collect(),
        }
    }

    fn sigma(bit: u8) -> f64 {
        1.0 - 2.0 * bit as f64
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| Self::sigma(s)).sum::<f64>() / self.n_cells() as f64
    }

    pub fn bond_sum(&self) -> f64 {
        let n = self.n_cells();
        (0..n)
            .map(|k| Self::sigma(self.spins[k]) * Self::sigma(self.spins[(k + 1) % n]))
            .sum()
    }

    pub fn energy(&self) -> f64 {
        -self.bond_sum()
    }

    pub fn nn_correlation(&self) -> f64 {
        self.bond_sum() / self.n_cells() as f64
    }

    /// Index of the configuration read as a little-endian binary number.
    pub fn index(&self) -> usize {
        self.spins
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &s)| acc | (s as usize) << k)
    }
}

/// Switch probability, optionally tied to an inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetropolisParams {
    p: f64,
    beta_j: Option<f64>,
}

impl MetropolisParams {
    pub fn new(p: f64, beta_j: Option<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", "must lie in [0, 1]"));
        }
        if let Some(b) = beta_j {
            if b.is_nan() || b < 0.0 {
                return Err(invalid("beta_j", "must be >= 0"));
            }
            if (p - switch_probability(b)).abs() >= 1e-12 {
                return Err(invalid("p", "inconsistent with beta_j (p = 1 − e^{−4βJ})"));
            }
        }
        Ok(Self { p, beta_j })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        Self::new(p, None)
    }

    pub fn from_beta_j(beta_j: f64) -> Result<Self> {
        if beta_j.is_nan() || beta_j < 0.0 {
            return Err(invalid("beta_j", "must be >= 0"));
        }
        Self::new(switch_probability(beta_j), Some(beta_j))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn beta_j(&self) -> Option<f64> {
        self.beta_j
    }
}

/// `p = 1 − e^{−4βJ}`.
pub fn switch_probability(beta_j: f64) -> f64 {
    -(-4.0 * beta_j).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationSchedule {
    /// Even cells, then odd cells. Requires an even number of cells.
    EvenOddSublattices,
    /// One uniformly chosen cell per step.
    SingleRandomCell,
}

/// Cells activated in a single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// All cells with `k % 2 == parity`.
    Sublattice(u8),
    Cell(usize),
}

impl Activation {
    pub fn cells(&self, n_cells: usize) -> Vec<usize> {
        match *self {
            Activation::Sublattice(parity) => (parity as usize..n_cells).step_by(2).collect(),
            Activation::Cell(k) => vec![k],
        }
    }

    fn validate(&self, n_cells: usize) -> Result<()> {
        match *self {
            Activation::Sublattice(parity) => {
                if !n_cells.is_multiple_of(2) {
                    return Err(invalid(
                        "cells",
                        "sublattice activation needs an even number of cells",
                    ));
                }
                if parity > 1 {
                    return Err(invalid("parity", "must be 0 or 1"));
                }
            }
            Activation::Cell(k) => {
                if k >= n_cells {
                    return Err(invalid("cell", format!("{k} >= {n_cells}")));
                }
            }
        }
        Ok(())
    }
}

impl ActivationSchedule {
    /// Steps making up one sweep (every cell activated once on average).
    pub fn sweep(&self, n_cells: usize, rng: &mut RngStream) -> Vec<Activation> {
        match self {
            ActivationSchedule::EvenOddSublattices => {
                vec![Activation::Sublattice(0), Activation::Sublattice(1)]
            }
            ActivationSchedule::SingleRandomCell => (0..n_cells)
                .map(|_| Activation::Cell(rng.random_range(0..n_cells)))
                .collect(),
        }
    }

    pub fn validate(&self, n_cells: usize) -> Result<()> {
        match self {
            ActivationSchedule::EvenOddSublattices if !n_cells.is_multiple_of(2) => Err(invalid(
                "cells",
                "even/odd sublattice scheduling needs an even number of cells",
            )),
            _ => Ok(()),
        }
    }
}

/// The classical cell rule.
pub fn local_rule(s_left: u8, s_k: u8, s_right: u8, ancilla: u8) -> u8 {
    let hold = ancilla & (s_left == s_right) as u8 & (s_k == s_right) as u8;
    (s_k ^ 1) ^ hold
}

/// Law `[P(0), P(1)]` of the updated cell under the classical rule.
pub fn classical_cell_law(s_left: u8, s_k: u8, s_right: u8, p: f64) -> [f64; 2] {
    let mut law = [0.0; 2];
    law[local_rule(s_left, s_k, s_right, 1) as usize] += p;
    law[local_rule(s_left, s_k, s_right, 0) as usize] += 1.0 - p;
    law
}

/// One automaton step: each activated cell reads its neighbours from the
/// current configuration, draws its switch with probability `p`, and applies
/// [`local_rule`].
pub fn classical_step(
    chain: &IsingChain,
    params: &MetropolisParams,
    activation: &Activation,
    rng: &mut RngStream,
) -> Result<IsingChain> {
    update_cells(chain, activation, |l, k, r| {
        let ancilla = (rng.random::<f64>() < params.p) as u8;
        Ok(local_rule(l, k, r, ancilla))
    })
}

fn update_cells(
    chain: &IsingChain,
    activation: &Activation,
    mut rule: impl FnMut(u8, u8, u8) -> Result<u8>,
) -> Result<IsingChain> {
    let n = chain.n_cells();
    activation.validate(n)?;
    let cells = activation.cells(n);
    assert!(non_adjacent(&cells, n), "adjacent cells activated together");
    let mut next = chain.clone();
    for k in cells {
        let (l, s, r) = chain.neighbours(k);
        next.spins[k] = rule(l, s, r)?;
    }
    Ok(next)
}

/// No two of the (sorted) `cells` are neighbours on the ring.
pub fn non_adjacent(cells: &[usize], n_cells: usize) -> bool {
    let close = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d == 1 || d == n_cells - 1
    };
    cells.windows(2).all(|w| !close(w[0], w[1]))
        && (cells.len() < 3 || !close(cells[0], cells[cells.len() - 1]))
}

// quantum cell layout
const LEFT: usize = 0;
const CELL: usize = 1;
const RIGHT: usize = 2;
const SWITCH: usize = 3;

fn cell_circuit(s_left: u8, s_k: u8, s_right: u8, p: f64) -> Result<PureState> {
    let index = s_left as usize | (s_k as usize) << CELL | (s_right as usize) << RIGHT;
    let mut state = PureState::basis(4, index)?;
    let theta = p.sqrt().asin();
    let not = SingleQubitGate::not();
    state.apply_all(&[
        GateOp::single(SingleQubitGate::exp_not(theta), SWITCH),
        GateOp::cnot(CELL, LEFT),
        GateOp::cnot(CELL, RIGHT),
        GateOp::single(not, LEFT),
        GateOp::single(not, RIGHT),
        GateOp::controlled(not, &[SWITCH, LEFT, RIGHT], CELL),
        GateOp::single(not, CELL),
    ])?;
    Ok(state)
}

fn check_spins(bits: [u8; 3]) -> Result<()> {
    if bits.iter().any(|&b| b > 1) {
        Err(invalid("spins", "spins are bits"))
    } else {
        Ok(())
    }
}

/// Quantum-cell update: runs the cell circuit and measures the cell qubit,
/// optionally in the conjugated basis `basis` (identity when `None`).
pub fn quantum_cell_update(
    s_left: u8,
    s_k: u8,
    s_right: u8,
    params: &MetropolisParams,
    basis: Option<&SingleQubitGate>,
    rng: &mut RngStream,
) -> Result<u8> {
    check_spins([s_left, s_k, s_right])?;
    let mut state = cell_circuit(s_left, s_k, s_right, params.p)?;
    match basis {
        Some(b) => state.measure_in_basis(CELL, b, rng),
        None => state.measure(CELL, rng),
    }
}

/// Exact Born law `[P(0), P(1)]` of [`quantum_cell_update`] in the
/// computational basis.
pub fn quantum_cell_law(
    s_left: u8,
    s_k: u8,
    s_right: u8,
    params: &MetropolisParams,
) -> Result<[f64; 2]> {
    check_spins([s_left, s_k, s_right])?;
    let state = cell_circuit(s_left, s_k, s_right, params.p)?;
    Ok([state.probability(CELL, 0)?, state.probability(CELL, 1)?])
}

/// Quantum-cell counterpart of [`classical_step`].
pub fn quantum_step(
    chain: &IsingChain,
    params: &MetropolisParams,
    activation: &Activation,
    rng: &mut RngStream,
) -> Result<IsingChain> {
    update_cells(chain, activation, |l, k, r| {
        quantum_cell_update(l, k, r, params, None, rng)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Classical,
    QuantumCell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    /// 1-based sweep index.
    pub sweep: u64,
    pub magnetization: f64,
    pub energy: f64,
    pub nn_correlation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// One entry per post-burn-in sweep.
    pub series: Vec<Observation>,
    pub magnetization: Estimate,
    pub energy: Estimate,
    pub nn_correlation: Estimate,
    pub final_chain: IsingChain,
}

/// Runs `sweeps` sweeps and records observables after each sweep past
/// `burn_in`. Error bars are batch means over [`BATCHES`] blocks.
pub fn simulate(
    chain: &IsingChain,
    params: &MetropolisParams,
    schedule: ActivationSchedule,
    sweeps: u64,
    burn_in: u64,
    mode: UpdateMode,
    rng: &mut RngStream,
) -> Result<Simulation> {
    if sweeps <= burn_in {
        return Err(invalid("sweeps", "must exceed burn_in"));
    }
    schedule.validate(chain.n_cells())?;
    let mut current = chain.clone();
    let mut series = Vec::with_capacity((sweeps - burn_in) as usize);
    for sweep in 1..=sweeps {
        for activation in schedule.sweep(current.n_cells(), rng) {
            current = match mode {
                UpdateMode::Classical => classical_step(&current, params, &activation, rng)?,
                UpdateMode::QuantumCell => quantum_step(&current, params, &activation, rng)?,
            };
        }
        if sweep > burn_in {
            series.push(Observation {
                sweep,
                magnetization: current.magnetization(),
                energy: current.energy(),
                nn_correlation: current.nn_correlation(),
            });
        }
    }
    let column = |f: fn(&Observation) -> f64| -> Vec<f64> { series.iter().map(f).collect() };
    Ok(Simulation {
        magnetization: batch_means(&column(|o| o.magnetization), BATCHES),
        energy: batch_means(&column(|o| o.energy), BATCHES),
        nn_correlation: batch_means(&column(|o| o.nn_correlation), BATCHES),
        series,
        final_chain: current,
    })
}

/// Transfer-matrix value of `⟨σ_k σ_{k+m}⟩` on a ring of `n_cells`:
/// `(t^m + t^{N−m}) / (1 + t^N)`, `t = tanh(βJ)`.
pub fn exact_correlation(n_cells: usize, beta_j: f64, distance: usize) -> Result<f64> {
    if distance > n_cells {
        return Err(invalid("distance", "must be <= N"));
    }
    if beta_j.is_nan() || beta_j < 0.0 {
        return Err(invalid("beta_j", "must be >= 0"));
    }
    let t = beta_j.tanh();
    let pow = |k: usize| if k == 0 { 1.0 } else { t.powi(k as i32) };
    Ok((pow(distance) + pow(n_cells - distance)) / (1.0 + pow(n_cells)))
}

/// Gibbs weights `e^{−βE}/Z` of all `2^N` configurations (little-endian index),
/// for small rings.
pub fn gibbs_distribution(n_cells: usize, beta_j: f64) -> Result<Vec<f64>> {
    if !(3..=20).contains(&n_cells) {
        return Err(invalid("n_cells", "enumeration supports 3..=20 cells"));
    }
    let weights: Vec<f64> = (0..1usize << n_cells)
        .map(|i| {
            let chain = IsingChain {
                spins: (0..n_cells).map(|k| ((i >> k) & 1) as u8).collect(),
            };
            (-beta_j * chain.energy()).exp()
        })
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}
