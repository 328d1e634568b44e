use std::fmt;
use std::str::FromStr;

use crate::quantum::QubitSpec;

use super::ProtocolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartyId {
    Alice,
    Bob,
    Arbitrator,
}

impl PartyId {
    pub fn label(self) -> &'static str {
        match self {
            PartyId::Alice => "alice",
            PartyId::Bob => "bob",
            PartyId::Arbitrator => "arbitrator",
        }
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The string of message qubits Alice signs.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageString(Vec<QubitSpec>);

impl MessageString {
    pub fn new(qubits: Vec<QubitSpec>) -> Result<Self, ProtocolError> {
        if qubits.is_empty() {
            return Err(ProtocolError::InvalidConfig(
                "message must hold at least one qubit".into(),
            ));
        }
        Ok(Self(qubits))
    }

    pub fn haar_random<R: rand::Rng + ?Sized>(
        n: usize,
        rng: &mut R,
    ) -> Result<Self, ProtocolError> {
        Self::new((0..n).map(|_| QubitSpec::haar_random(rng)).collect())
    }

    pub fn qubits(&self) -> &[QubitSpec] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Order in which Bob's x measurement happens relative to the corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerificationMode {
    /// Bob measures his shares first and reconstructs the message
    /// analytically from the reported outcomes.
    PaperOrder,
    /// Bob keeps his shares unmeasured until Alice's and the arbitrator's
    /// outcomes arrive, then corrects them physically.
    Deferred,
}

impl VerificationMode {
    pub fn label(self) -> &'static str {
        match self {
            VerificationMode::PaperOrder => "paper-order",
            VerificationMode::Deferred => "deferred",
        }
    }
}

impl FromStr for VerificationMode {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-order" | "paper" => Ok(VerificationMode::PaperOrder),
            "deferred" => Ok(VerificationMode::Deferred),
            other => Err(ProtocolError::InvalidConfig(format!(
                "unknown mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Base,
    /// Bob routes his request through Alice, whose re-signature binds it.
    Undeniable,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Base => "base",
            Variant::Undeniable => "undeniable",
        }
    }
}

impl FromStr for Variant {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Variant::Base),
            "undeniable" => Ok(Variant::Undeniable),
            other => Err(ProtocolError::InvalidConfig(format!(
                "unknown variant {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    /// The arbitrator found the secret record inconsistent with the message.
    GammaZero,
    /// Bob's corrected qubits do not reproduce the message.
    StateMismatch,
    /// A payload could not be decrypted or decoded.
    DecryptError,
}

impl RejectReason {
    pub fn label(self) -> &'static str {
        match self {
            RejectReason::GammaZero => "gamma-zero",
            RejectReason::StateMismatch => "state-mismatch",
            RejectReason::DecryptError => "decrypt-error",
        }
    }
}

/// Bob's final verdict on a signed message.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub gamma: bool,
    pub mode: VerificationMode,
    pub per_qubit_fidelity: Vec<f64>,
    pub accepted: bool,
    pub reject_reason: Option<RejectReason>,
}

impl VerificationReport {
    pub(crate) fn rejected(mode: VerificationMode, gamma: bool, reason: RejectReason) -> Self {
        Self {
            gamma,
            mode,
            per_qubit_fidelity: Vec::new(),
            accepted: false,
            reject_reason: Some(reason),
        }
    }

    pub(crate) fn from_fidelities(
        mode: VerificationMode,
        fidelities: Vec<f64>,
        epsilon: f64,
    ) -> Self {
        let accepted = fidelities.iter().all(|f| *f >= 1.0 - epsilon);
        Self {
            gamma: true,
            mode,
            per_qubit_fidelity: fidelities,
            accepted,
            reject_reason: (!accepted).then_some(RejectReason::StateMismatch),
        }
    }

    pub fn min_fidelity(&self) -> Option<f64> {
        self.per_qubit_fidelity.iter().copied().reduce(f64::min)
    }
}
