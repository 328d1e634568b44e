//! The three-party signing protocol: set-up, signing, verification and the
//! undeniable variant, run over an interceptable in-memory channel.

mod allocation;
mod channel;
mod payload;
mod phases;
mod run;
mod transcript;
mod types;

use thiserror::Error;

use crate::cipher::{CipherError, DecodeError};
use crate::quantum::QuantumError;

pub use allocation::{GhzAllocation, QubitRole, Register};
pub use channel::{Channel, Envelope, EnvelopePayload, Interceptor};
pub use payload::{blob_digest, PadBudget, SignatureRef, YbPayload, YtbPayload};
pub(crate) use phases::arbitrator_check;
pub use phases::{
    initial_phase, paper_order_fidelity, signing_phase, undeniable_variant, verification_phase,
    InitialState, ReceiptEvidence, SigningOutput, VerificationOutcome, ALICE_KEY_ID, BOB_KEY_ID,
};
pub use run::{execute, run_protocol, MessageSource, ProtocolConfig, RunOutcome};
pub use transcript::{parse_line, Event, EventBody, MeasurementKind, Phase, Transcript};
pub use types::{
    MessageString, PartyId, RejectReason, Variant, VerificationMode, VerificationReport,
};

/// Bob accepts when every corrected qubit has fidelity at least `1 - ACCEPT_EPSILON`.
pub const ACCEPT_EPSILON: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error("decode failed: {0}")]
    Decode(#[from] DecodeError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("key of {available} bits cannot cover a run needing {needed}")]
    InsufficientKey { needed: usize, available: usize },
    #[error("message has {message} qubits but {registers} registers were allocated")]
    LengthMismatch { message: usize, registers: usize },
    #[error("unexpected envelope {0}")]
    UnexpectedEnvelope(&'static str),
    #[error("share {0:?} is not available")]
    MissingShare(QubitRole),
    #[error("invalid register state: {0}")]
    InvalidState(&'static str),
}
