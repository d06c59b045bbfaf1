//! Single-qubit tactics.
//!
//! All catalog gates live in SU(2) with the conventions
//!
//! ```text
//! NOT = [[0, i], [i, 0]]            H = (i/√2)·[[1, 1], [1, -1]]
//! ```
//!
//! so `NOT² = H² = -I`. Physically irrelevant global phases are therefore
//! everywhere; compare gates with [`equal_up_to_phase`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng::RngStream;

/// Complex amplitude carried by every matrix entry and state component.
pub type Amplitude = Complex64;

const ZERO: Amplitude = Complex64::new(0.0, 0.0);
const ONE: Amplitude = Complex64::new(1.0, 0.0);
const I: Amplitude = Complex64::new(0.0, 1.0);

/// Tolerance used when validating that a user-supplied matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A 2×2 unitary acting on one qubit, `[[m00, m01], [m10, m11]]` in the
/// `(|0⟩, |1⟩)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitGate {
    pub m00: Amplitude,
    pub m01: Amplitude,
    pub m10: Amplitude,
    pub m11: Amplitude,
}

/// Named entries of the gate catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    Identity,
    Not,
    Hadamard,
    /// `ⁿ√NOT = I·cos(π/2n) + NOT·sin(π/2n)`, `n ≥ 1`.
    RootNot(u32),
    /// `e^{NOT·φ} = I·cos φ + NOT·sin φ`.
    ExpNot(f64),
    /// `e^{H·φ} = I·cos φ + H·sin φ`.
    ExpH(f64),
    /// `NOT^r = e^{NOT·rπ/2}`.
    NotPow(f64),
    /// `V_α(β) = NOT·cos β + (I·cos α + H·NOT·H·sin α)·sin β`.
    V {
        alpha: f64,
        beta: f64,
    },
}

impl GateSpec {
    pub fn build(self) -> Result<SingleQubitGate> {
        Ok(match self {
            GateSpec::Identity => SingleQubitGate::identity(),
            GateSpec::Not => SingleQubitGate::not(),
            GateSpec::Hadamard => SingleQubitGate::hadamard(),
            GateSpec::RootNot(n) => {
                if n < 1 {
                    return Err(invalid("n", "root_not requires n >= 1"));
                }
                SingleQubitGate::root_not(n)
            }
            GateSpec::ExpNot(phi) => finite("phi", phi).map(SingleQubitGate::exp_not)?,
            GateSpec::ExpH(phi) => finite("phi", phi).map(SingleQubitGate::exp_h)?,
            GateSpec::NotPow(r) => finite("r", r).map(SingleQubitGate::not_pow)?,
            GateSpec::V { alpha, beta } => {
                SingleQubitGate::v(finite("alpha", alpha)?, finite("beta", beta)?)
            }
        })
    }
}

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(name, "must be finite"))
    }
}

/// Looks a gate up by catalog name.
///
/// Names: `identity`, `not`, `hadamard`, `root_not(n)`, `exp_not(φ)`,
/// `exp_h(φ)`, `not_pow(r)`, `v(α, β)`.
pub fn gate(name: &str, params: &[f64]) -> Result<SingleQubitGate> {
    let arity = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: k,
                got: params.len(),
            })
        }
    };
    let spec = match name {
        "identity" => {
            arity(0)?;
            GateSpec::Identity
        }
        "not" => {
            arity(0)?;
            GateSpec::Not
        }
        "hadamard" => {
            arity(0)?;
            GateSpec::Hadamard
        }
        "root_not" => {
            arity(1)?;
            let n = params[0];
            if n.is_nan() || n < 1.0 || n.fract() != 0.0 || n > u32::MAX as f64 {
                return Err(invalid("n", "root_not requires an integer n >= 1"));
            }
            GateSpec::RootNot(n as u32)
        }
        "exp_not" => {
            arity(1)?;
            GateSpec::ExpNot(params[0])
        }
        "exp_h" => {
            arity(1)?;
            GateSpec::ExpH(params[0])
        }
        "not_pow" => {
            arity(1)?;
            GateSpec::NotPow(params[0])
        }
        "v" => {
            arity(2)?;
            GateSpec::V {
                alpha: params[0],
                beta: params[1],
            }
        }
        other => return Err(Error::UnknownGate(other.to_string())),
    };
    spec.build()
}

impl SingleQubitGate {
    /// Builds a gate from raw entries, checking finiteness and unitarity.
    pub fn new(m00: Amplitude, m01: Amplitude, m10: Amplitude, m11: Amplitude) -> Result<Self> {
        let g = Self::raw(m00, m01, m10, m11);
        if g.entries()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = g.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(g)
    }

    const fn raw(m00: Amplitude, m01: Amplitude, m10: Amplitude, m11: Amplitude) -> Self {
        Self { m00, m01, m10, m11 }
    }

    pub fn entries(&self) -> [Amplitude; 4] {
        [self.m00, self.m01, self.m10, self.m11]
    }

    pub fn identity() -> Self {
        Self::raw(ONE, ZERO, ZERO, ONE)
    }

    pub fn not() -> Self {
        Self::raw(ZERO, I, I, ZERO)
    }

    pub fn hadamard() -> Self {
        let h = I * FRAC_1_SQRT_2;
        Self::raw(h, h, h, -h)
    }

    /// Standard Pauli X (`[[0,1],[1,0]]`), outside SU(2). Not part of the
    /// catalog; used where an exact permutation without phases is wanted.
    pub fn pauli_x() -> Self {
        Self::raw(ZERO, ONE, ONE, ZERO)
    }

    pub fn exp_not(phi: f64) -> Self {
        Self::identity().scale(phi.cos()) + Self::not().scale(phi.sin())
    }

    pub fn exp_h(phi: f64) -> Self {
        Self::identity().scale(phi.cos()) + Self::hadamard().scale(phi.sin())
    }

    pub fn root_not(n: u32) -> Self {
        Self::exp_not(PI / (2.0 * n as f64))
    }

    pub fn not_pow(r: f64) -> Self {
        Self::exp_not(r * FRAC_PI_2)
    }

    /// `H·NOT·H = diag(-i, i)`.
    pub fn hnoth() -> Self {
        Self::raw(-I, ZERO, ZERO, I)
    }

    pub fn v(alpha: f64, beta: f64) -> Self {
        let kick = Self::identity().scale(alpha.cos()) + Self::hnoth().scale(alpha.sin());
        Self::not().scale(beta.cos()) + kick.scale(beta.sin())
    }

    /// Single-qubit unitary mapping `|0⟩` to the given normalized state
    /// `a|0⟩ + b|1⟩` (second column `(-b̄, ā)`, so the gate is in SU(2)).
    pub fn basis_from_state(a: Amplitude, b: Amplitude) -> Result<Self> {
        Self::new(a, -b.conj(), b, a.conj())
    }

    pub fn dagger(&self) -> Self {
        Self::raw(
            self.m00.conj(),
            self.m10.conj(),
            self.m01.conj(),
            self.m11.conj(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Amplitude::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Amplitude) -> Self {
        Self::raw(self.m00 * s, self.m01 * s, self.m10 * s, self.m11 * s)
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| compose(*self, acc))
    }

    /// Largest entrywise deviation of `M†M` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        max_entry_distance(&compose(self.dagger(), *self), &Self::identity())
    }

    /// Applies the matrix to the column `(a, b)`.
    pub fn act(&self, a: Amplitude, b: Amplitude) -> (Amplitude, Amplitude) {
        (self.m00 * a + self.m01 * b, self.m10 * a + self.m11 * b)
    }
}

impl std::ops::Add for SingleQubitGate {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::raw(
            self.m00 + o.m00,
            self.m01 + o.m01,
            self.m10 + o.m10,
            self.m11 + o.m11,
        )
    }
}

/// `lhs * rhs` applies `rhs` first.
impl Mul for SingleQubitGate {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        compose(self, rhs)
    }
}

impl fmt::Display for SingleQubitGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m00, self.m01, self.m10, self.m11
        )
    }
}

/// Matrix product `g2·g1`: `g1` acts first.
pub fn compose(g2: SingleQubitGate, g1: SingleQubitGate) -> SingleQubitGate {
    SingleQubitGate::raw(
        g2.m00 * g1.m00 + g2.m01 * g1.m10,
        g2.m00 * g1.m01 + g2.m01 * g1.m11,
        g2.m10 * g1.m00 + g2.m11 * g1.m10,
        g2.m10 * g1.m01 + g2.m11 * g1.m11,
    )
}

pub fn max_entry_distance(a: &SingleQubitGate, b: &SingleQubitGate) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Smallest entrywise distance `min_λ max |g1 − λ·g2|` over unit `λ`, with `λ`
/// fixed by the largest entry of `g2`.
pub fn phase_distance(g1: &SingleQubitGate, g2: &SingleQubitGate) -> f64 {
    let (e1, e2) = (g1.entries(), g2.entries());
    let pivot = (0..4)
        .max_by(|&i, &j| e2[i].norm_sqr().total_cmp(&e2[j].norm_sqr()))
        .unwrap_or(0);
    let ratio = e1[pivot] / e2[pivot];
    let lambda = if ratio.norm() > 0.0 && ratio.is_finite() {
        ratio / ratio.norm()
    } else {
        ONE
    };
    max_entry_distance(g1, &g2.scale_complex(lambda))
}

/// True iff `g1 = λ·g2` entrywise within `tol` for some unit complex `λ`.
pub fn equal_up_to_phase(g1: &SingleQubitGate, g2: &SingleQubitGate, tol: f64) -> bool {
    phase_distance(g1, g2) <= tol
}

/// Coefficients of `g` in the orthogonal operator basis
/// `{I, NOT, H·NOT·H, NOT·H·NOT·H}` (all traces `tr(P†Q) = 2δ`).
pub fn tactic_coefficients(g: &SingleQubitGate) -> [Amplitude; 4] {
    let basis = [
        SingleQubitGate::identity(),
        SingleQubitGate::not(),
        SingleQubitGate::hnoth(),
        compose(SingleQubitGate::not(), SingleQubitGate::hnoth()),
    ];
    basis.map(|p| {
        let m = compose(p.dagger(), *g);
        (m.m00 + m.m11) * 0.5
    })
}

/// Worst deviation of each catalog identity, with the random-parameter
/// identities checked over `draws` draws from `rng`.
pub fn catalog_deviations(draws: usize, rng: &mut RngStream) -> Vec<(&'static str, f64)> {
    let not = SingleQubitGate::not();
    let h = SingleQubitGate::hadamard();
    let minus_i = SingleQubitGate::identity().scale(-1.0);
    let diag = SingleQubitGate::raw(-I, ZERO, ZERO, I);
    let root_not = (1..=64u32)
        .map(|n| phase_distance(&SingleQubitGate::root_not(n).pow(n), &not))
        .fold(0.0, f64::max);
    let mut additivity = 0.0f64;
    let mut v_law = 0.0f64;
    let mut unitarity = 0.0f64;
    for _ in 0..draws {
        let mut angle = |scale: f64| (rng.random::<f64>() * 2.0 - 1.0) * scale;
        let (p1, p2) = (angle(PI), angle(PI));
        let (alpha, b1, b2) = (angle(PI) + PI, angle(PI), angle(PI));
        let lhs = compose(SingleQubitGate::exp_not(p1), SingleQubitGate::exp_not(p2));
        additivity = additivity.max(max_entry_distance(&lhs, &SingleQubitGate::exp_not(p1 + p2)));
        let lhs = SingleQubitGate::v(alpha, b2) * not.pow(3) * SingleQubitGate::v(alpha, b1);
        v_law = v_law.max(max_entry_distance(
            &lhs,
            &SingleQubitGate::v(alpha, b1 + b2),
        ));
        unitarity = unitarity.max(SingleQubitGate::v(alpha, b1).unitarity_deviation());
    }
    vec![
        ("hnoth_diagonal", max_entry_distance(&(h * not * h), &diag)),
        ("not_squared", max_entry_distance(&(not * not), &minus_i)),
        ("hadamard_squared", max_entry_distance(&(h * h), &minus_i)),
        ("root_not_power", root_not),
        ("exp_not_additivity", additivity),
        ("v_composition", v_law),
        ("v_unitarity", unitarity),
    ]
}
