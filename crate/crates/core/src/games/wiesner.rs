//! Wiesner banknote identification games.
//!
//! A banknote is a series of sub-games. In each, Trent holds a secret qubit
//! `|ψ_T⟩` and Alice (played by the issuer) either acts on it or not,
//! according to her recorded bit. A claimant presenting the note replays the
//! sub-game with his own bit; Trent then checks, by measuring in the
//! `{|ψ_T⟩, ⊥}` basis, that his qubit is unchanged.
//!
//! * [`VerifyVariant::Swap`]: a bit of 1 swaps `|ψ_T⟩` with an ancilla
//!   `|ψ_T'⟩` (controlled-swap). Matching bits swap twice or never.
//! * [`VerifyVariant::Hadamard`]: no ancilla; a bit of 1 applies `H` to
//!   `|ψ_T⟩`. Matching bits give `H² = −I` or nothing, and a single `H` maps
//!   the projective coordinate `z ↦ (1 − z)/(1 + z)`.
//!
//! Qubit layout per round: Alice = 0, Trent = 1, then the ancilla (swap
//! variant only), then the claimant.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::gate::{Amplitude, SingleQubitGate};
use crate::rng::RngStream;
use crate::state::{GateOp, PureState};
use crate::stats::Estimate;

use super::tally;

/// Bloch angles of a qubit state `cos(θ/2)|0⟩ + e^{iφ}·sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization {
    pub theta: f64,
    pub phi: f64,
}

/// Nonhomogeneous coordinate `z` of `|0⟩ + z|1⟩` on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectiveCoord {
    Finite(Complex64),
    /// The state `|1⟩`.
    Infinity,
}

impl ProjectiveCoord {
    /// Image under a single Hadamard: `z ↦ (1 − z)/(1 + z)`, with `∞ ↦ −1`
    /// and `−1 ↦ ∞`.
    pub fn hadamard_image(self) -> Self {
        match self {
            Self::Infinity => Self::Finite(Complex64::new(-1.0, 0.0)),
            Self::Finite(z) => {
                let den = Complex64::new(1.0, 0.0) + z;
                if den.norm() == 0.0 {
                    Self::Infinity
                } else {
                    Self::Finite((Complex64::new(1.0, 0.0) - z) / den)
                }
            }
        }
    }
}

impl Polarization {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid("theta", "must lie in [0, π]"));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(invalid("phi", "must lie in [0, 2π)"));
        }
        Ok(Self { theta, phi })
    }

    pub fn zero() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn one() -> Self {
        Self {
            theta: PI,
            phi: 0.0,
        }
    }

    /// Uniform on the sphere: `θ = arccos(1 − 2u)`, `φ = 2πv`.
    pub fn haar(rng: &mut RngStream) -> Self {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        Self {
            theta: (1.0 - 2.0 * u).acos(),
            phi: TAU * v,
        }
    }

    pub fn amplitudes(&self) -> [Amplitude; 2] {
        let half = self.theta / 2.0;
        [
            Amplitude::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.phi),
        ]
    }

    pub fn z(&self) -> ProjectiveCoord {
        if self.theta == PI {
            ProjectiveCoord::Infinity
        } else {
            ProjectiveCoord::Finite(Complex64::from_polar((self.theta / 2.0).tan(), self.phi))
        }
    }

    pub fn from_z(z: ProjectiveCoord) -> Self {
        match z {
            ProjectiveCoord::Infinity => Self::one(),
            ProjectiveCoord::Finite(z) => {
                let phi = if z.norm() == 0.0 {
                    0.0
                } else {
                    z.arg().rem_euclid(TAU)
                };
                Self {
                    theta: 2.0 * z.norm().atan(),
                    phi: if phi >= TAU { 0.0 } else { phi },
                }
            }
        }
    }

    /// Unitary taking `|0⟩` to this state; measuring in its frame tests
    /// "unchanged" (outcome 0) against "orthogonal" (outcome 1).
    pub fn basis_gate(&self) -> SingleQubitGate {
        let [a, b] = self.amplitudes();
        SingleQubitGate::basis_from_state(a, b).expect("Bloch amplitudes are normalized")
    }
}

/// One recorded sub-game: Trent's secret state and Alice's bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubGameRecord {
    pub trent_state: Polarization,
    pub alice_bit: u8,
}

impl SubGameRecord {
    pub fn z(&self) -> ProjectiveCoord {
        self.trent_state.z()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Banknote {
    pub serial: u64,
    pub rounds: Vec<SubGameRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisPolicy {
    HaarRandom,
    /// Only `|0⟩` and `|1⟩`.
    ComputationalPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyVariant {
    Swap,
    Hadamard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forger {
    /// Claims uniformly random bits.
    UniformGuess,
    /// Measures the note qubit in the computational basis, claims the result
    /// and hands back the collapsed qubit.
    MeasureResend,
    /// Control run: the legitimate holder knows Alice's bits.
    Legitimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub pass: bool,
    /// 0-based index of the first rejected round.
    pub first_fail: Option<usize>,
}

/// Draws a banknote of `k` sub-games.
pub fn mint_banknote(
    k: usize,
    policy: BasisPolicy,
    serial: u64,
    rng: &mut RngStream,
) -> Result<Banknote> {
    if k < 1 {
        return Err(invalid("k", "a banknote needs at least one sub-game"));
    }
    let rounds = (0..k)
        .map(|_| {
            let trent_state = match policy {
                BasisPolicy::HaarRandom => Polarization::haar(rng),
                BasisPolicy::ComputationalPair => {
                    if rng.random::<bool>() {
                        Polarization::one()
                    } else {
                        Polarization::zero()
                    }
                }
            };
            let alice_bit = rng.random::<bool>() as u8;
            SubGameRecord {
                trent_state,
                alice_bit,
            }
        })
        .collect();
    Ok(Banknote { serial, rounds })
}

#[derive(Debug, Clone, Copy)]
enum Claim {
    Bit(u8),
    MeasureResend,
}

struct Round {
    variant: VerifyVariant,
    state: PureState,
}

const ALICE: usize = 0;
const TRENT: usize = 1;
const ANCILLA: usize = 2;

impl Round {
    fn claimant(&self) -> usize {
        match self.variant {
            VerifyVariant::Swap => 3,
            VerifyVariant::Hadamard => 2,
        }
    }

    /// Prepares the qubits and plays Alice's move.
    fn open(
        record: &SubGameRecord,
        variant: VerifyVariant,
        ancilla: Option<Polarization>,
    ) -> Result<Self> {
        let bit = |b: u8| {
            if b == 1 {
                [Amplitude::new(0.0, 0.0), Amplitude::new(1.0, 0.0)]
            } else {
                [Amplitude::new(1.0, 0.0), Amplitude::new(0.0, 0.0)]
            }
        };
        let mut factors = vec![bit(record.alice_bit), record.trent_state.amplitudes()];
        if variant == VerifyVariant::Swap {
            factors.push(ancilla.unwrap_or_else(Polarization::zero).amplitudes());
        }
        factors.push(bit(0));
        let mut round = Round {
            variant,
            state: PureState::product(&factors)?,
        };
        round.controlled_move(ALICE)?;
        Ok(round)
    }

    fn controlled_move(&mut self, control: usize) -> Result<()> {
        match self.variant {
            VerifyVariant::Swap => self.state.apply_swap(&[control], TRENT, ANCILLA),
            VerifyVariant::Hadamard => self.state.apply(&GateOp::controlled(
                SingleQubitGate::hadamard(),
                &[control],
                TRENT,
            )),
        }
    }

    fn claim(&mut self, claim: Claim, rng: &mut RngStream) -> Result<()> {
        let bit = match claim {
            Claim::Bit(b) => b,
            Claim::MeasureResend => self.state.measure(TRENT, rng)?,
        };
        if bit == 1 {
            let b = self.claimant();
            self.state
                .apply(&GateOp::single(SingleQubitGate::not(), b))?;
        }
        self.controlled_move(self.claimant())
    }
}

fn check_bit(b: u8) -> Result<()> {
    if b > 1 {
        Err(invalid("claimant_bits", format!("{b} is not a bit")))
    } else {
        Ok(())
    }
}

fn play_round(
    record: &SubGameRecord,
    claim: Claim,
    variant: VerifyVariant,
    rng: &mut RngStream,
) -> Result<bool> {
    let ancilla = (variant == VerifyVariant::Swap).then(|| Polarization::haar(rng));
    let mut round = Round::open(record, variant, ancilla)?;
    round.claim(claim, rng)?;
    let outcome = round
        .state
        .measure_in_basis(TRENT, &record.trent_state.basis_gate(), rng)?;
    Ok(outcome == 0)
}

/// Exact probability that Trent accepts one round for a claimant bit. The
/// ancilla state only matters for the swap variant.
pub fn round_pass_probability(
    record: &SubGameRecord,
    claimant_bit: u8,
    variant: VerifyVariant,
    ancilla: Polarization,
) -> Result<f64> {
    check_bit(claimant_bit)?;
    let mut round = Round::open(record, variant, Some(ancilla))?;
    // Claim::Bit never samples
    round.claim(Claim::Bit(claimant_bit), &mut RngStream::new(0, 0))?;
    round
        .state
        .probability_in_basis(TRENT, &record.trent_state.basis_gate(), 0)
}

fn verify_with(
    note: &Banknote,
    claims: impl Fn(usize) -> Claim,
    variant: VerifyVariant,
    rng: &mut RngStream,
) -> Result<Verification> {
    for (i, record) in note.rounds.iter().enumerate() {
        if !play_round(record, claims(i), variant, rng)? {
            return Ok(Verification {
                pass: false,
                first_fail: Some(i),
            });
        }
    }
    Ok(Verification {
        pass: true,
        first_fail: None,
    })
}

/// Plays every sub-game of `note` against `claimant_bits`; stops at the first
/// rejected round.
pub fn verify_banknote(
    note: &Banknote,
    claimant_bits: &[u8],
    variant: VerifyVariant,
    rng: &mut RngStream,
) -> Result<Verification> {
    if claimant_bits.len() != note.rounds.len() {
        return Err(Error::LengthMismatch {
            expected: note.rounds.len(),
            got: claimant_bits.len(),
        });
    }
    claimant_bits.iter().try_for_each(|&b| check_bit(b))?;
    verify_with(note, |i| Claim::Bit(claimant_bits[i]), variant, rng)
}

/// Mints a fresh `k`-round note per trial and lets `forger` present it.
/// Returns the pass rate with its binomial standard error.
pub fn forgery_experiment(
    k: usize,
    trials: u64,
    variant: VerifyVariant,
    policy: BasisPolicy,
    forger: Forger,
    rng: &RngStream,
) -> Result<Estimate> {
    if k < 1 {
        return Err(invalid("k", "must be >= 1"));
    }
    if trials < 1 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let [_, passes] = tally::<2, _>(trials, rng, |r| {
        let note = mint_banknote(k, policy, r.stream_id(), r)?;
        let v = match forger {
            Forger::Legitimate => {
                let bits: Vec<u8> = note.rounds.iter().map(|s| s.alice_bit).collect();
                verify_banknote(&note, &bits, variant, r)?
            }
            Forger::UniformGuess => {
                let bits: Vec<u8> = (0..k).map(|_| r.random::<bool>() as u8).collect();
                verify_banknote(&note, &bits, variant, r)?
            }
            Forger::MeasureResend => verify_with(&note, |_| Claim::MeasureResend, variant, r)?,
        };
        Ok(v.pass as usize)
    })?;
    Ok(Estimate::proportion(passes, trials))
}

/// 17 significant digits in JSON-compatible scientific notation.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

impl Banknote {
    /// One-line record `{"serial":…,"rounds":[{"theta":…,"phi":…,"alice_bit":…},…]}`
    /// with fixed field order.
    pub fn to_record(&self) -> String {
        let mut out = format!("{{\"serial\":{},\"rounds\":[", self.serial);
        for (i, r) in self.rounds.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "{{\"theta\":{},\"phi\":{},\"alice_bit\":{}}}",
                real(r.trent_state.theta),
                real(r.trent_state.phi),
                r.alice_bit
            );
        }
        out.push_str("]}");
        out
    }

    pub fn from_record(line: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedRecord(m.to_string());
        let v: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord(e.to_string()))?;
        let serial = v["serial"].as_u64().ok_or_else(|| bad("serial"))?;
        let rounds = v["rounds"]
            .as_array()
            .ok_or_else(|| bad("rounds"))?
            .iter()
            .map(|r| {
                let theta = r["theta"].as_f64().ok_or_else(|| bad("theta"))?;
                let phi = r["phi"].as_f64().ok_or_else(|| bad("phi"))?;
                let alice_bit = match r["alice_bit"].as_u64() {
                    Some(b @ (0 | 1)) => b as u8,
                    _ => return Err(bad("alice_bit")),
                };
                Ok(SubGameRecord {
                    trent_state: Polarization::new(theta, phi)?,
                    alice_bit,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if rounds.is_empty() {
            return Err(bad("empty rounds"));
        }
        Ok(Self { serial, rounds })
    }
}
