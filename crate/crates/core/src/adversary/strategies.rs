//! Channel interceptors, one per attack.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cipher::{
    derive_bases, encode_signature, transform_message, BitString, SecretKey, SignaturePayload,
    BELL_BITS, COUNT_BITS,
};
use crate::protocol::{EnvelopePayload, Interceptor, MessageString, PartyId};
use crate::quantum::BellOutcome;

/// Part of the signature ciphertext a tamperer may flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TamperRegion {
    Any,
    BellOutcomes,
    Record,
}

impl TamperRegion {
    /// Bit range of this region in an `n`-qubit signature.
    pub fn range(self, n: usize, signature_len: usize) -> std::ops::Range<usize> {
        let record_start = COUNT_BITS + BELL_BITS * n;
        match self {
            TamperRegion::Any => 0..signature_len,
            TamperRegion::BellOutcomes => COUNT_BITS..record_start,
            TamperRegion::Record => record_start..signature_len,
        }
    }
}

fn signed_message(
    sender: PartyId,
    receiver: PartyId,
    payload: &mut EnvelopePayload,
) -> Option<(&mut MessageString, &mut crate::cipher::CipherBlob)> {
    match (sender, receiver, payload) {
        (PartyId::Alice, PartyId::Bob, EnvelopePayload::SignedMessage { message, signature }) => {
            Some((message, signature))
        }
        _ => None,
    }
}

/// Flips one uniformly chosen bit of the signature ciphertext in `region`.
pub struct Tamper {
    pub region: TamperRegion,
    pub rng: ChaCha8Rng,
    pub flipped: Option<usize>,
}

impl Interceptor for Tamper {
    fn intercept(&mut self, sender: PartyId, receiver: PartyId, payload: &mut EnvelopePayload) {
        if let Some((message, signature)) = signed_message(sender, receiver, payload) {
            let range = self.region.range(message.len(), signature.len());
            let index = self.rng.random_range(range);
            signature.bits.flip(index);
            self.flipped = Some(index);
        }
    }
}

/// Replaces the message and replays Alice's signature unchanged.
pub struct Swap {
    pub replacement: MessageString,
}

impl Interceptor for Swap {
    fn intercept(&mut self, sender: PartyId, receiver: PartyId, payload: &mut EnvelopePayload) {
        if let Some((message, _)) = signed_message(sender, receiver, payload) {
            *message = self.replacement.clone();
        }
    }
}

/// Bob's forgery: a message of his choosing and a ciphertext he invents
/// without K_a, placed at the pad offset of the genuine one.
pub struct BobForge {
    pub forged: MessageString,
    pub rng: ChaCha8Rng,
}

impl Interceptor for BobForge {
    fn intercept(&mut self, sender: PartyId, receiver: PartyId, payload: &mut EnvelopePayload) {
        if let Some((message, signature)) = signed_message(sender, receiver, payload) {
            *message = self.forged.clone();
            signature.bits = (0..signature.len())
                .map(|_| self.rng.random::<bool>())
                .collect();
        }
    }
}

/// Holds both keys, writes the correct record for the message on the
/// channel, but must guess Alice's Bell outcomes.
pub struct KeyCompromise {
    pub rng: ChaCha8Rng,
    pub k_a: Option<SecretKey>,
    pub guessed: Vec<BellOutcome>,
}

impl KeyCompromise {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self {
            rng,
            k_a: None,
            guessed: Vec::new(),
        }
    }
}

impl Interceptor for KeyCompromise {
    fn on_keys(&mut self, k_a: &SecretKey, _k_b: &SecretKey) {
        self.k_a = Some(k_a.clone());
    }

    fn intercept(&mut self, sender: PartyId, receiver: PartyId, payload: &mut EnvelopePayload) {
        let Some(k_a) = &self.k_a else { return };
        let Some((message, signature)) = signed_message(sender, receiver, payload) else {
            return;
        };
        let Ok(record) = derive_bases(k_a, message.len())
            .and_then(|bases| transform_message(message.qubits(), &bases))
        else {
            return;
        };
        self.guessed = (0..message.len())
            .map(|_| BellOutcome::ALL[self.rng.random_range(0..4)])
            .collect();
        let Ok(forged) = SignaturePayload::new(self.guessed.clone(), record) else {
            return;
        };
        let plain = encode_signature(&forged);
        let pad = k_a
            .bits()
            .slice(signature.pad_offset..signature.pad_offset + plain.len());
        signature.bits = plain
            .iter()
            .zip(pad.iter())
            .map(|(p, k)| p ^ k)
            .collect::<BitString>();
    }
}
