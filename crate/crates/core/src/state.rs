//! Dense pure states over a handful of qubits.
//!
//! Amplitudes are indexed little-endian: bit `b` of index `i` is the value of
//! qubit `b` in basis state `|i⟩`, so qubit 0 is the least significant bit.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::gate::{Amplitude, SingleQubitGate};
use crate::rng::RngStream;

/// Norm² below which a measurement branch is treated as impossible.
pub const RENORM_THRESHOLD: f64 = 1e-12;

const NORM_TOL: f64 = 1e-10;
const MAX_QUBITS: usize = 16;

/// A gate applied to `target` iff every qubit in `controls` is `|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub gate: SingleQubitGate,
    pub target: usize,
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn single(gate: SingleQubitGate, target: usize) -> Self {
        Self {
            gate,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled(gate: SingleQubitGate, controls: &[usize], target: usize) -> Self {
        Self {
            gate,
            target,
            controls: controls.to_vec(),
        }
    }

    /// The alliance `|0⟩⟨0|⊗I + |1⟩⟨1|⊗NOT`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::controlled(SingleQubitGate::not(), &[control], target)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::controlled(SingleQubitGate::not(), &[c1, c2], target)
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        for &q in self.controls.iter().chain(std::iter::once(&self.target)) {
            check_index(q, num_qubits)?;
        }
        if self.controls.contains(&self.target) {
            return Err(Error::TargetIsControl(self.target));
        }
        Ok(())
    }
}

fn check_index(index: usize, num_qubits: usize) -> Result<()> {
    if index < num_qubits {
        Ok(())
    } else {
        Err(Error::QubitOutOfRange { index, num_qubits })
    }
}

fn check_bit(outcome: u8) -> Result<()> {
    if outcome <= 1 {
        Ok(())
    } else {
        Err(invalid("outcome", format!("{outcome} is not a bit")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Amplitude>,
}

impl PureState {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(invalid(
                "num_qubits",
                format!("must be in 1..={MAX_QUBITS}"),
            ));
        }
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(invalid("index", format!("{index} >= {len}")));
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); len];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_QUBITS {
            return Err(invalid(
                "amps",
                format!("length {len} is not 2^m with m >= 1"),
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Tensor product of single-qubit states; `qubits[0]` becomes qubit 0.
    pub fn product(qubits: &[[Amplitude; 2]]) -> Result<Self> {
        if qubits.is_empty() || qubits.len() > MAX_QUBITS {
            return Err(invalid("qubits", format!("need 1..={MAX_QUBITS} factors")));
        }
        let mut amps = vec![Amplitude::new(1.0, 0.0)];
        for (q, pair) in qubits.iter().enumerate() {
            let len = amps.len();
            let mut next = vec![Amplitude::new(0.0, 0.0); len * 2];
            for (i, &a) in amps.iter().enumerate() {
                next[i] = a * pair[0];
                next[i | (1 << q)] = a * pair[1];
            }
            amps = next;
        }
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let tbit = 1usize << op.target;
        let cmask = op.controls.iter().fold(0usize, |m, &c| m | (1 << c));
        for i in 0..self.amps.len() {
            if i & tbit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let (a, b) = op.gate.act(self.amps[i], self.amps[j]);
            self.amps[i] = a;
            self.amps[j] = b;
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, ops: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        ops.into_iter().try_for_each(|op| self.apply(op))
    }

    /// Exchanges qubits `a` and `b` iff every control is `|1⟩` (Fredkin gate
    /// for one control). A pure amplitude permutation, no phases.
    pub fn apply_swap(&mut self, controls: &[usize], a: usize, b: usize) -> Result<()> {
        for &q in controls.iter().chain([a, b].iter()) {
            check_index(q, self.num_qubits)?;
        }
        if a == b {
            return Err(invalid("swap", "targets must differ"));
        }
        if let Some(&c) = controls.iter().find(|&&c| c == a || c == b) {
            return Err(Error::TargetIsControl(c));
        }
        let (abit, bbit) = (1usize << a, 1usize << b);
        let cmask = controls.iter().fold(0usize, |m, &c| m | (1 << c));
        for i in 0..self.amps.len() {
            // visit each |…1_a…0_b…⟩ ↔ |…0_a…1_b…⟩ pair once
            if i & cmask == cmask && i & abit != 0 && i & bbit == 0 {
                self.amps.swap(i, (i & !abit) | bbit);
            }
        }
        Ok(())
    }

    /// Born probability that measuring `target` yields `outcome`.
    pub fn probability(&self, target: usize, outcome: u8) -> Result<f64> {
        check_index(target, self.num_qubits)?;
        check_bit(outcome)?;
        let p = self.branch_norm_sqr(target, outcome) / self.norm_sqr();
        Ok(p.clamp(0.0, 1.0))
    }

    fn branch_norm_sqr(&self, target: usize, outcome: u8) -> f64 {
        let tbit = 1usize << target;
        let want = if outcome == 1 { tbit } else { 0 };
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & tbit == want)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// Projects `target` onto `outcome` and renormalizes; returns the branch
    /// probability. Errors when that probability is below [`RENORM_THRESHOLD`].
    pub fn project(&mut self, target: usize, outcome: u8) -> Result<f64> {
        check_index(target, self.num_qubits)?;
        check_bit(outcome)?;
        let total = self.norm_sqr();
        if total < RENORM_THRESHOLD {
            return Err(Error::DegenerateMeasurement { norm_sqr: total });
        }
        let branch = self.branch_norm_sqr(target, outcome);
        let p = branch / total;
        if p < RENORM_THRESHOLD {
            return Err(Error::DegenerateMeasurement { norm_sqr: p });
        }
        let tbit = 1usize << target;
        let want = if outcome == 1 { tbit } else { 0 };
        let scale = 1.0 / branch.sqrt();
        for (i, z) in self.amps.iter_mut().enumerate() {
            if i & tbit == want {
                *z *= scale;
            } else {
                *z = Amplitude::new(0.0, 0.0);
            }
        }
        Ok(p)
    }

    /// Computational-basis measurement of `target`, collapsing the state.
    ///
    /// Outcomes whose probability is below [`RENORM_THRESHOLD`] are never
    /// sampled.
    pub fn measure(&mut self, target: usize, rng: &mut RngStream) -> Result<u8> {
        check_index(target, self.num_qubits)?;
        let total = self.norm_sqr();
        if total < RENORM_THRESHOLD {
            return Err(Error::DegenerateMeasurement { norm_sqr: total });
        }
        let p1 = self.branch_norm_sqr(target, 1) / total;
        let p0 = self.branch_norm_sqr(target, 0) / total;
        let u: f64 = rng.random();
        let bit = if p1 < RENORM_THRESHOLD {
            0
        } else if p0 < RENORM_THRESHOLD || u * (p0 + p1) < p1 {
            1
        } else {
            0
        };
        self.project(target, bit)?;
        Ok(bit)
    }

    /// Measures `target` in the basis `{basis|0⟩, basis|1⟩}`: rotate with
    /// `basis†`, measure, rotate back.
    pub fn measure_in_basis(
        &mut self,
        target: usize,
        basis: &SingleQubitGate,
        rng: &mut RngStream,
    ) -> Result<u8> {
        self.apply(&GateOp::single(basis.dagger(), target))?;
        let bit = self.measure(target, rng)?;
        self.apply(&GateOp::single(*basis, target))?;
        Ok(bit)
    }

    /// Outcome probabilities of [`PureState::measure_in_basis`] without
    /// sampling.
    pub fn probability_in_basis(
        &self,
        target: usize,
        basis: &SingleQubitGate,
        outcome: u8,
    ) -> Result<f64> {
        let mut rotated = self.clone();
        rotated.apply(&GateOp::single(basis.dagger(), target))?;
        rotated.probability(target, outcome)
    }

    /// Full joint outcome distribution of measuring every qubit, indexed like
    /// the amplitudes.
    pub fn distribution(&self) -> Vec<f64> {
        let total = self.norm_sqr();
        self.amps.iter().map(|z| z.norm_sqr() / total).collect()
    }
}
