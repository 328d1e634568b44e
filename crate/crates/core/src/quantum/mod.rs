//! Minimal state-vector engine for registers of up to four qubits.
//!
//! Covers what the signature protocol needs: GHZ preparation, tensor
//! composition with a message qubit, Bell and x-basis measurements, Pauli
//! corrections, single-qubit marginals and an exact branch-expansion oracle
//! for outcome statistics. Randomness is always injected by the caller.

mod density;
mod measure;
mod oracle;
mod pauli;
mod state;

use thiserror::Error;

pub use density::{bob_marginal, reduced_density, DensityMatrix2};
pub use measure::{
    bell_branches, bell_measure, sample_branch, x_branches, x_measure, BellOutcome, Branch,
    XOutcome, NEGLIGIBLE_PROBABILITY,
};
pub use oracle::{enumerate_joint_distribution, sample_chain, ChainOutcome, JointDistribution};
pub use pauli::{apply_pauli, pauli_correction, CorrectionTable, PauliOp};
pub use state::{compose, fidelity, ghz3, Amplitude, PureState, QubitSpec, MAX_QUBITS};

/// Tolerance on state norms and fidelities.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance on exact linear-algebra identities.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("register of {0} qubits exceeds the supported maximum")]
    TooManyQubits(usize),
    #[error("{len} amplitudes do not describe a {qubits}-qubit register")]
    AmplitudeCount { qubits: usize, len: usize },
    #[error("amplitude is not finite")]
    NonFinite,
    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),
    #[error("qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("qubit index {0} used twice")]
    DuplicateIndex(usize),
    #[error("expected a {expected}-qubit state, found {found}")]
    QubitCountMismatch { expected: usize, found: usize },
    #[error("sampled a measurement branch of zero probability")]
    ZeroProbabilityBranch,
}
