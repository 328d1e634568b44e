//! Ownership of the live GHZ registers, one per message qubit.

use rand::Rng;

use crate::quantum::{
    apply_pauli, bell_measure, compose, ghz3, x_measure, BellOutcome, PauliOp, PureState,
    QubitSpec, XOutcome,
};

use super::types::PartyId;
use super::ProtocolError;

/// What a qubit inside a register is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitRole {
    Message,
    AliceShare,
    ArbitratorShare,
    BobShare,
}

impl QubitRole {
    pub fn owner(self) -> PartyId {
        match self {
            QubitRole::Message | QubitRole::AliceShare => PartyId::Alice,
            QubitRole::ArbitratorShare => PartyId::Arbitrator,
            QubitRole::BobShare => PartyId::Bob,
        }
    }
}

/// One entangled register and the role of each of its qubits, in state order.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    state: PureState,
    roles: Vec<QubitRole>,
}

impl Register {
    fn ghz() -> Self {
        Self {
            state: ghz3(),
            roles: vec![
                QubitRole::AliceShare,
                QubitRole::ArbitratorShare,
                QubitRole::BobShare,
            ],
        }
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    fn position(&self, role: QubitRole) -> Result<usize, ProtocolError> {
        self.roles
            .iter()
            .position(|r| *r == role)
            .ok_or(ProtocolError::MissingShare(role))
    }

    pub(crate) fn attach_message(&mut self, message: &QubitSpec) -> Result<(), ProtocolError> {
        if self.roles.contains(&QubitRole::Message) {
            return Err(ProtocolError::InvalidState("message already attached"));
        }
        self.state = compose(message, &self.state)?;
        self.roles.insert(0, QubitRole::Message);
        Ok(())
    }

    /// Alice's joint measurement of the message qubit and her share.
    pub(crate) fn bell_measure<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<BellOutcome, ProtocolError> {
        let pair = (
            self.position(QubitRole::Message)?,
            self.position(QubitRole::AliceShare)?,
        );
        let (outcome, residual) = bell_measure(&self.state, pair, rng)?;
        self.state = residual;
        self.roles
            .retain(|r| !matches!(r, QubitRole::Message | QubitRole::AliceShare));
        Ok(outcome)
    }

    pub(crate) fn x_measure<R: Rng + ?Sized>(
        &mut self,
        role: QubitRole,
        rng: &mut R,
    ) -> Result<XOutcome, ProtocolError> {
        let index = self.position(role)?;
        let (outcome, residual) = x_measure(&self.state, index, rng)?;
        self.state = residual;
        self.roles.remove(index);
        Ok(outcome)
    }

    pub(crate) fn apply(&mut self, role: QubitRole, op: PauliOp) -> Result<(), ProtocolError> {
        let index = self.position(role)?;
        self.state = apply_pauli(op, &self.state, index)?;
        Ok(())
    }

    /// The state of `role` when it is the only qubit left.
    pub fn lone_qubit(&self, role: QubitRole) -> Result<&PureState, ProtocolError> {
        if self.roles == [role] {
            Ok(&self.state)
        } else {
            Err(ProtocolError::InvalidState("share is still entangled"))
        }
    }
}

/// The n registers created for one signed message.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzAllocation {
    registers: Vec<Register>,
}

impl GhzAllocation {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            registers: (0..n).map(|_| Register::ghz()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub(crate) fn registers_mut(&mut self) -> &mut [Register] {
        &mut self.registers
    }

    /// Every live share as (register index, role, owner).
    pub fn shares(&self) -> impl Iterator<Item = (usize, QubitRole, PartyId)> + '_ {
        self.registers
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.roles.iter().map(move |role| (i, *role, role.owner())))
    }
}
