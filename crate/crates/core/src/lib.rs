//! A quantum-game laboratory.
//!
//! * [`gate`] and [`state`]: a dense state-vector engine with the SU(2) tactic
//!   catalog (`NOT = [[0,i],[i,0]]`, `H = (i/√2)[[1,1],[1,-1]]`), controlled
//!   application, projective measurement and conjugate-basis measurement.
//! * [`games`]: the Newcomb breaker and qutrojan, the Elitzur–Vaidman
//!   circuit-breaker, Zeno and anti-Zeno bomb testers, the supply-demand
//!   switch and Wiesner banknote identification games.
//! * [`ising`]: a cellular automaton running Metropolis dynamics on the cyclic
//!   1D Ising chain, with a quantum-cell variant and a transfer-matrix oracle.
//!
//! Qubits are little-endian throughout; see [`state`].

pub mod error;
pub mod games;
pub mod gate;
pub mod ising;
pub mod rng;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
pub use gate::{compose, equal_up_to_phase, gate, Amplitude, GateSpec, SingleQubitGate};
pub use rng::RngStream;
pub use state::{GateOp, PureState};
pub use stats::Estimate;
