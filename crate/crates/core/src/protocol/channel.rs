//! In-memory, ordered, lossless channel with an interception hook.

use crate::cipher::{push_qubits, BitString, CipherBlob, SecretKey};

use super::payload::SignatureRef;
use super::transcript::{Event, EventBody, MeasurementKind, Phase};
use super::types::{MessageString, PartyId};

#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopePayload {
    /// Alice to Bob: the message qubits followed by the signature.
    SignedMessage {
        message: MessageString,
        signature: CipherBlob,
    },
    /// Bob's request, to the arbitrator (or to Alice in the undeniable flow).
    Yb(CipherBlob),
    /// The arbitrator's reply to Bob.
    Ytb(CipherBlob),
    /// Undeniable flow, Alice to the arbitrator: Bob's request and Alice's
    /// signature binding it.
    ForwardedSignature {
        yb: CipherBlob,
        signature: CipherBlob,
    },
}

impl EnvelopePayload {
    pub fn kind(&self) -> &'static str {
        match self {
            EnvelopePayload::SignedMessage { .. } => "signed_message",
            EnvelopePayload::Yb(_) => "y_b",
            EnvelopePayload::Ytb(_) => "y_tb",
            EnvelopePayload::ForwardedSignature { .. } => "forwarded_signature",
        }
    }

    /// Every ciphertext carried by this payload.
    pub fn ciphertexts(&self) -> Vec<&CipherBlob> {
        match self {
            EnvelopePayload::SignedMessage { signature, .. } => vec![signature],
            EnvelopePayload::Yb(b) | EnvelopePayload::Ytb(b) => vec![b],
            EnvelopePayload::ForwardedSignature { yb, signature } => vec![yb, signature],
        }
    }

    /// Wire image used in transcripts.
    pub fn wire_bits(&self) -> BitString {
        let mut out = BitString::new();
        if let EnvelopePayload::SignedMessage { message, .. } = self {
            out.push_u32(message.len() as u32);
            push_qubits(&mut out, message.qubits());
        }
        for blob in self.ciphertexts() {
            let r = SignatureRef::of(blob);
            out.push_u32(r.pad_offset as u32);
            out.push_u32(r.bits.len() as u32);
            out.extend_from(&r.bits);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub sender: PartyId,
    pub receiver: PartyId,
    pub sequence: u64,
    pub payload: EnvelopePayload,
}

/// Adversary hook. Sees key material only if it chooses to accept it in
/// [`Interceptor::on_keys`], and can rewrite envelope contents in transit.
pub trait Interceptor {
    fn on_keys(&mut self, _k_a: &SecretKey, _k_b: &SecretKey) {}

    fn intercept(&mut self, sender: PartyId, receiver: PartyId, payload: &mut EnvelopePayload);
}

/// Ordered channel that also keeps the run's event log and pad log.
pub struct Channel<'a> {
    next_seq: u64,
    phase: Phase,
    events: Vec<Event>,
    pads: Vec<CipherBlob>,
    interceptor: Option<&'a mut dyn Interceptor>,
}

impl<'a> Channel<'a> {
    pub fn new(interceptor: Option<&'a mut dyn Interceptor>) -> Self {
        Self {
            next_seq: 0,
            phase: Phase::Config,
            events: Vec::new(),
            pads: Vec::new(),
            interceptor,
        }
    }

    pub(crate) fn interceptor(&mut self) -> Option<&mut (dyn Interceptor + 'a)> {
        self.interceptor.as_deref_mut()
    }

    fn push(&mut self, body: EventBody) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.events.push(Event {
            seq,
            phase: self.phase,
            body,
        });
        seq
    }

    pub fn enter_phase(&mut self, phase: Phase) {
        self.phase = phase;
        self.push(EventBody::PhaseStart);
    }

    pub(crate) fn record(&mut self, body: EventBody) {
        self.push(body);
    }

    pub(crate) fn record_measurement(
        &mut self,
        party: PartyId,
        kind: MeasurementKind,
        bits: BitString,
    ) {
        self.push(EventBody::Measurement { party, kind, bits });
    }

    /// Logs a fresh encryption for the pad audit.
    pub(crate) fn note_pad(&mut self, blob: &CipherBlob) {
        self.pads.push(blob.clone());
    }

    /// Delivers `payload`, giving the interceptor a chance to rewrite it.
    pub fn send(
        &mut self,
        sender: PartyId,
        receiver: PartyId,
        mut payload: EnvelopePayload,
    ) -> Envelope {
        if let Some(hook) = self.interceptor.as_deref_mut() {
            hook.intercept(sender, receiver, &mut payload);
        }
        let envelope = Envelope {
            sender,
            receiver,
            sequence: self.next_seq,
            payload,
        };
        self.push(EventBody::Envelope(envelope.clone()));
        envelope
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn pads(&self) -> &[CipherBlob] {
        &self.pads
    }

    pub(crate) fn into_logs(self) -> (Vec<Event>, Vec<CipherBlob>) {
        (self.events, self.pads)
    }
}
