//! Projective measurements with deterministic branch expansion.
//!
//! Every measurement is first expanded into all of its branches (outcome,
//! Born probability, normalized residual); sampling then picks one branch
//! with a single draw from the injected random source. The branch
//! expansion doubles as the exact oracle for outcome statistics.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use super::state::{Amplitude, PureState};
use super::QuantumError;

/// Branches below this probability are never sampled and carry no residual.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-24;

/// Outcome of a joint measurement in the Bell basis.
///
/// Labels follow the signing-phase decomposition of `|p> ⊗ GHZ`:
/// `PsiPlus/PsiMinus = (|00> ± |11>)/sqrt(2)` and
/// `PhiPlus/PhiMinus = (|01> ± |10>)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellOutcome {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
    ];

    /// Two-bit wire code: PsiPlus=00, PsiMinus=01, PhiPlus=10, PhiMinus=11.
    pub fn code(self) -> u8 {
        match self {
            BellOutcome::PsiPlus => 0b00,
            BellOutcome::PsiMinus => 0b01,
            BellOutcome::PhiPlus => 0b10,
            BellOutcome::PhiMinus => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.code() == code)
    }

    /// Amplitudes over `|00>, |01>, |10>, |11>`.
    pub fn vector(self) -> [Amplitude; 4] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellOutcome::PsiPlus => [h, z, z, h],
            BellOutcome::PsiMinus => [h, z, z, -h],
            BellOutcome::PhiPlus => [z, h, h, z],
            BellOutcome::PhiMinus => [z, h, -h, z],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
        }
    }
}

/// Outcome of a single-qubit measurement along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XOutcome {
    PlusX,
    MinusX,
}

impl XOutcome {
    pub const ALL: [XOutcome; 2] = [XOutcome::PlusX, XOutcome::MinusX];

    /// Wire bit: `+x` is 0, `-x` is 1.
    pub fn bit(self) -> bool {
        matches!(self, XOutcome::MinusX)
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            XOutcome::MinusX
        } else {
            XOutcome::PlusX
        }
    }

    pub fn vector(self) -> [Amplitude; 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            XOutcome::PlusX => [h, h],
            XOutcome::MinusX => [h, -h],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            XOutcome::PlusX => "+x",
            XOutcome::MinusX => "-x",
        }
    }
}

/// One term of a measurement's branch expansion.
#[derive(Debug, Clone)]
pub struct Branch<O> {
    pub outcome: O,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits; `None` for negligible branches.
    pub residual: Option<PureState>,
}

/// Projects `targets` of `state` onto the basis vector `vector` (indexed with
/// `targets[0]` as the most significant bit) and returns the unnormalized
/// residual over the remaining qubits, in their original order.
fn project(state: &PureState, targets: &[usize], vector: &[Amplitude]) -> Vec<Amplitude> {
    let n = state.qubit_count();
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    let mut residual = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let bit = |q: usize| (index >> (n - 1 - q)) & 1;
        let t = targets.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
        let r = rest.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
        residual[r] += vector[t].conj() * amp;
    }
    residual
}

fn expand<O: Copy>(
    state: &PureState,
    targets: &[usize],
    basis: impl IntoIterator<Item = (O, Vec<Amplitude>)>,
) -> Vec<Branch<O>> {
    let remaining = state.qubit_count() - targets.len();
    basis
        .into_iter()
        .map(|(outcome, vector)| {
            let residual = project(state, targets, &vector);
            let probability: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
            let residual = (probability > NEGLIGIBLE_PROBABILITY)
                .then(|| PureState::from_unnormalized(remaining, residual));
            Branch {
                outcome,
                probability,
                residual,
            }
        })
        .collect()
}

/// All four Bell-measurement branches on the ordered pair `(first, second)`.
pub fn bell_branches(
    state: &PureState,
    pair: (usize, usize),
) -> Result<Vec<Branch<BellOutcome>>, QuantumError> {
    state.check_index(pair.0)?;
    state.check_index(pair.1)?;
    if pair.0 == pair.1 {
        return Err(QuantumError::DuplicateIndex(pair.0));
    }
    Ok(expand(
        state,
        &[pair.0, pair.1],
        BellOutcome::ALL.map(|b| (b, b.vector().to_vec())),
    ))
}

/// Both x-measurement branches on `qubit`.
pub fn x_branches(state: &PureState, qubit: usize) -> Result<Vec<Branch<XOutcome>>, QuantumError> {
    state.check_index(qubit)?;
    Ok(expand(
        state,
        &[qubit],
        XOutcome::ALL.map(|x| (x, x.vector().to_vec())),
    ))
}

/// Samples one branch with a single uniform draw.
pub fn sample_branch<O: Copy, R: Rng + ?Sized>(
    branches: Vec<Branch<O>>,
    rng: &mut R,
) -> Result<(O, PureState), QuantumError> {
    let total: f64 = branches
        .iter()
        .filter(|b| b.residual.is_some())
        .map(|b| b.probability)
        .sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = None;
    for branch in branches {
        let Some(residual) = branch.residual else {
            continue;
        };
        if u < branch.probability {
            return Ok((branch.outcome, residual));
        }
        u -= branch.probability;
        last = Some((branch.outcome, residual));
    }
    // Rounding can leave `u` a hair above the final cumulative bound.
    last.ok_or(QuantumError::ZeroProbabilityBranch)
}

/// Bell measurement on `pair`; returns the outcome and the state of the
/// remaining qubits.
pub fn bell_measure<R: Rng + ?Sized>(
    state: &PureState,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<(BellOutcome, PureState), QuantumError> {
    sample_branch(bell_branches(state, pair)?, rng)
}

/// Measurement of `qubit` along x; returns the outcome and the residual.
pub fn x_measure<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    rng: &mut R,
) -> Result<(XOutcome, PureState), QuantumError> {
    sample_branch(x_branches(state, qubit)?, rng)
}
