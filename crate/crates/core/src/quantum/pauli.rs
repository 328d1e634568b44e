//! Pauli corrections that recover the message qubit on Bob's share.

use num_complex::Complex64;

use super::measure::{BellOutcome, XOutcome};
use super::state::{Amplitude, PureState};
use super::QuantumError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    Identity,
    SigmaX,
    SigmaZ,
    /// The product `sigma_x * sigma_z`: sigma_z acts first.
    SigmaXZ,
}

impl PauliOp {
    pub fn matrix(self) -> [[Amplitude; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            PauliOp::Identity => [[l, o], [o, l]],
            PauliOp::SigmaX => [[o, l], [l, o]],
            PauliOp::SigmaZ => [[l, o], [o, -l]],
            // [[0,1],[1,0]] * [[1,0],[0,-1]]
            PauliOp::SigmaXZ => [[o, -l], [l, o]],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PauliOp::Identity => "I",
            PauliOp::SigmaX => "X",
            PauliOp::SigmaZ => "Z",
            PauliOp::SigmaXZ => "XZ",
        }
    }
}

fn bell_row(bell: BellOutcome) -> usize {
    match bell {
        BellOutcome::PsiPlus => 0,
        BellOutcome::PsiMinus => 1,
        BellOutcome::PhiPlus => 2,
        BellOutcome::PhiMinus => 3,
    }
}

fn x_col(x: XOutcome) -> usize {
    match x {
        XOutcome::PlusX => 0,
        XOutcome::MinusX => 1,
    }
}

/// Lookup from (Alice's Bell outcome, arbitrator's x outcome) to the
/// correction Bob applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectionTable {
    entries: [[PauliOp; 2]; 4],
}

impl CorrectionTable {
    pub const STANDARD: CorrectionTable = CorrectionTable {
        entries: [
            [PauliOp::Identity, PauliOp::SigmaZ],
            [PauliOp::SigmaZ, PauliOp::Identity],
            [PauliOp::SigmaX, PauliOp::SigmaXZ],
            [PauliOp::SigmaXZ, PauliOp::SigmaX],
        ],
    };

    pub fn lookup(&self, bell: BellOutcome, arb: XOutcome) -> PauliOp {
        self.entries[bell_row(bell)][x_col(arb)]
    }

    /// Copy of the table with two entries exchanged.
    pub fn with_swapped(&self, a: (BellOutcome, XOutcome), b: (BellOutcome, XOutcome)) -> Self {
        let mut out = *self;
        let va = self.lookup(a.0, a.1);
        let vb = self.lookup(b.0, b.1);
        out.entries[bell_row(a.0)][x_col(a.1)] = vb;
        out.entries[bell_row(b.0)][x_col(b.1)] = va;
        out
    }

    /// Every (Bell, x) key, row-major.
    pub fn keys() -> impl Iterator<Item = (BellOutcome, XOutcome)> {
        BellOutcome::ALL
            .into_iter()
            .flat_map(|b| XOutcome::ALL.into_iter().map(move |x| (b, x)))
    }
}

impl Default for CorrectionTable {
    fn default() -> Self {
        Self::STANDARD
    }
}

pub fn pauli_correction(bell: BellOutcome, arb: XOutcome) -> PauliOp {
    CorrectionTable::STANDARD.lookup(bell, arb)
}

/// Applies `op` to `qubit` of `state`.
pub fn apply_pauli(
    op: PauliOp,
    state: &PureState,
    qubit: usize,
) -> Result<PureState, QuantumError> {
    state.check_index(qubit)?;
    let m = op.matrix();
    let mask = state.mask(qubit);
    let mut amps = state.amplitudes().to_vec();
    for low in (0..amps.len()).filter(|i| i & mask == 0) {
        let high = low | mask;
        let (a0, a1) = (amps[low], amps[high]);
        amps[low] = m[0][0] * a0 + m[0][1] * a1;
        amps[high] = m[1][0] * a0 + m[1][1] * a1;
    }
    PureState::new(state.qubit_count(), amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::{fidelity, QubitSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_entries() {
        use BellOutcome::*;
        use XOutcome::*;
        assert_eq!(pauli_correction(PsiPlus, PlusX), PauliOp::Identity);
        assert_eq!(pauli_correction(PsiPlus, MinusX), PauliOp::SigmaZ);
        assert_eq!(pauli_correction(PsiMinus, PlusX), PauliOp::SigmaZ);
        assert_eq!(pauli_correction(PsiMinus, MinusX), PauliOp::Identity);
        assert_eq!(pauli_correction(PhiPlus, PlusX), PauliOp::SigmaX);
        assert_eq!(pauli_correction(PhiPlus, MinusX), PauliOp::SigmaXZ);
        assert_eq!(pauli_correction(PhiMinus, PlusX), PauliOp::SigmaXZ);
        assert_eq!(pauli_correction(PhiMinus, MinusX), PauliOp::SigmaX);
    }

    #[test]
    fn sigma_z_restores_sign() {
        let p = QubitSpec::from_parts([0.6, 0.0, 0.0, 0.8]).unwrap();
        let flipped = QubitSpec::new(p.alpha(), -p.beta()).unwrap().to_state();
        let fixed = apply_pauli(PauliOp::SigmaZ, &flipped, 0).unwrap();
        assert_eq!(fixed, p.to_state());
    }

    #[test]
    fn identity_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = QubitSpec::haar_random(&mut rng).to_state();
        let s2 = s
            .tensor(&QubitSpec::haar_random(&mut rng).to_state())
            .unwrap();
        assert_eq!(apply_pauli(PauliOp::Identity, &s2, 1).unwrap(), s2);
        let twice = apply_pauli(
            PauliOp::SigmaX,
            &apply_pauli(PauliOp::SigmaX, &s2, 1).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(twice, s2);
    }

    #[test]
    fn xz_is_z_then_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let s = QubitSpec::haar_random(&mut rng).to_state();
        let composite = apply_pauli(PauliOp::SigmaXZ, &s, 0).unwrap();
        let stepwise = apply_pauli(
            PauliOp::SigmaX,
            &apply_pauli(PauliOp::SigmaZ, &s, 0).unwrap(),
            0,
        )
        .unwrap();
        for (a, b) in composite.amplitudes().iter().zip(stepwise.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((fidelity(&composite, &stepwise).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_rejects_bad_index() {
        let s = QubitSpec::zero().to_state();
        assert!(apply_pauli(PauliOp::SigmaX, &s, 1).is_err());
    }

    #[test]
    fn swapped_table_differs() {
        let t = CorrectionTable::STANDARD.with_swapped(
            (BellOutcome::PsiPlus, XOutcome::PlusX),
            (BellOutcome::PhiPlus, XOutcome::PlusX),
        );
        assert_eq!(
            t.lookup(BellOutcome::PsiPlus, XOutcome::PlusX),
            PauliOp::SigmaX
        );
        assert_eq!(
            t.lookup(BellOutcome::PhiPlus, XOutcome::PlusX),
            PauliOp::Identity
        );
        assert_eq!(CorrectionTable::keys().count(), 8);
    }
}
