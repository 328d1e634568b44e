//! Plaintext layouts of Bob's request (y_b) and the arbitrator's reply
//! (y_tb), plus the per-run pad budget derived from them.
//!
//! All counts are 32-bit big-endian. A signature reference is
//! `offset(32) len(32) bits[len]`: the ciphertext as received, together with
//! where its pad starts in the signer's key.
//!
//! ```text
//! y_b:  n(32) m(32) bob_x[m] sigref message[n x 256]
//! y_tb: a(32) bell[a x 2] m(32) bob_x[m] t(32) arb_x[t] gamma(1) sigref
//! ```

use sha2::{Digest, Sha256};

use crate::cipher::{
    check_count, push_qubits, read_count, read_qubits, signature_bits, BitReader, BitString,
    CipherBlob, DecodeError, KeyId, AMPLITUDE_PAIR_BITS, BELL_BITS, COUNT_BITS, DIGEST_BITS,
};
use crate::quantum::{BellOutcome, XOutcome};

use super::types::{MessageString, Variant};

/// A ciphertext quoted inside another payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureRef {
    pub pad_offset: usize,
    pub bits: BitString,
}

impl SignatureRef {
    pub fn of(blob: &CipherBlob) -> Self {
        Self {
            pad_offset: blob.pad_offset,
            bits: blob.bits.clone(),
        }
    }

    /// Re-attaches the key the receiver believes padded this ciphertext.
    pub fn to_blob(&self, key: &KeyId) -> CipherBlob {
        CipherBlob {
            bits: self.bits.clone(),
            pad_key_id: key.clone(),
            pad_offset: self.pad_offset,
        }
    }

    fn encoded_bits(sig_len: usize) -> usize {
        2 * COUNT_BITS + sig_len
    }

    fn push(&self, out: &mut BitString) -> Result<(), DecodeError> {
        out.push_u32(check_count(self.pad_offset)?);
        out.push_u32(check_count(self.bits.len())?);
        out.extend_from(&self.bits);
        Ok(())
    }

    fn read(r: &mut BitReader<'_>) -> Result<Self, DecodeError> {
        let pad_offset = r.read_u32()? as usize;
        let len = read_count(r, 1)?;
        Ok(Self {
            pad_offset,
            bits: r.read_bits(len)?,
        })
    }
}

fn push_x(out: &mut BitString, outcomes: &[XOutcome]) -> Result<(), DecodeError> {
    out.push_u32(check_count(outcomes.len())?);
    for x in outcomes {
        out.push(x.bit());
    }
    Ok(())
}

fn read_x(r: &mut BitReader<'_>) -> Result<Vec<XOutcome>, DecodeError> {
    let m = read_count(r, 1)?;
    (0..m)
        .map(|_| Ok(XOutcome::from_bit(r.read_bit()?)))
        .collect()
}

/// Bob's request to the arbitrator.
#[derive(Debug, Clone, PartialEq)]
pub struct YbPayload {
    /// Empty in deferred mode, where Bob has not measured yet.
    pub bob_outcomes: Vec<XOutcome>,
    pub signature: SignatureRef,
    pub message: MessageString,
}

impl YbPayload {
    pub fn encode(&self) -> Result<BitString, DecodeError> {
        let mut out = BitString::new();
        out.push_u32(check_count(self.message.len())?);
        push_x(&mut out, &self.bob_outcomes)?;
        self.signature.push(&mut out)?;
        push_qubits(&mut out, self.message.qubits());
        Ok(out)
    }

    pub fn decode(bits: &BitString) -> Result<Self, DecodeError> {
        let mut r = bits.reader();
        let n = r.read_u32()? as usize;
        let bob_outcomes = read_x(&mut r)?;
        let signature = SignatureRef::read(&mut r)?;
        if n.saturating_mul(AMPLITUDE_PAIR_BITS) != r.remaining() {
            return Err(DecodeError::UnexpectedEnd {
                at: r.position(),
                needed: n.saturating_mul(AMPLITUDE_PAIR_BITS),
            });
        }
        let qubits = read_qubits(&mut r, n)?;
        r.finish()?;
        let message = MessageString::new(qubits).map_err(|_| DecodeError::CountMismatch {
            expected: 1,
            found: 0,
        })?;
        Ok(Self {
            bob_outcomes,
            signature,
            message,
        })
    }

    /// Upper bound on the encoded size for `n` qubits.
    pub fn max_bits(n: usize, sig_len: usize) -> usize {
        COUNT_BITS + COUNT_BITS + n + SignatureRef::encoded_bits(sig_len) + n * AMPLITUDE_PAIR_BITS
    }
}

/// The arbitrator's reply to Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct YtbPayload {
    /// Empty when the signature did not decode.
    pub alice_outcomes: Vec<BellOutcome>,
    pub bob_outcomes: Vec<XOutcome>,
    pub arb_outcomes: Vec<XOutcome>,
    pub gamma: bool,
    pub signature: SignatureRef,
}

impl YtbPayload {
    pub fn encode(&self) -> Result<BitString, DecodeError> {
        let mut out = BitString::new();
        out.push_u32(check_count(self.alice_outcomes.len())?);
        for b in &self.alice_outcomes {
            out.push_uint(u64::from(b.code()), BELL_BITS as u32);
        }
        push_x(&mut out, &self.bob_outcomes)?;
        push_x(&mut out, &self.arb_outcomes)?;
        out.push(self.gamma);
        self.signature.push(&mut out)?;
        Ok(out)
    }

    pub fn decode(bits: &BitString) -> Result<Self, DecodeError> {
        let mut r = bits.reader();
        let a = read_count(&mut r, BELL_BITS)?;
        let mut alice_outcomes = Vec::with_capacity(a);
        for _ in 0..a {
            let code = r.read_uint(BELL_BITS as u32)? as u8;
            alice_outcomes
                .push(BellOutcome::from_code(code).ok_or(DecodeError::InvalidCode(code))?);
        }
        let bob_outcomes = read_x(&mut r)?;
        let arb_outcomes = read_x(&mut r)?;
        let gamma = r.read_bit()?;
        let signature = SignatureRef::read(&mut r)?;
        r.finish()?;
        Ok(Self {
            alice_outcomes,
            bob_outcomes,
            arb_outcomes,
            gamma,
            signature,
        })
    }

    pub fn max_bits(n: usize, sig_len: usize) -> usize {
        COUNT_BITS + BELL_BITS * n + 2 * (COUNT_BITS + n) + 1 + SignatureRef::encoded_bits(sig_len)
    }
}

/// SHA-256 over a ciphertext's pad offset, length and bits.
pub fn blob_digest(blob: &CipherBlob) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((blob.pad_offset as u64).to_be_bytes());
    hasher.update((blob.len() as u64).to_be_bytes());
    hasher.update(blob.bits.to_bytes());
    hasher.finalize().into()
}

/// Key bits one run consumes, computed from the encodings before any pad
/// is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadBudget {
    /// Bits of K_a: basis prefix plus every Alice ciphertext.
    pub alice_key: usize,
    /// Bits of K_b: Bob's request plus the arbitrator's reply.
    pub bob_key: usize,
}

impl PadBudget {
    pub fn for_run(n: usize, variant: Variant) -> Self {
        let sig = signature_bits(n);
        let receipt_sig = sig + DIGEST_BITS;
        let (alice_key, reply_sig) = match variant {
            Variant::Base => (n + sig, sig),
            Variant::Undeniable => (n + sig + receipt_sig, receipt_sig),
        };
        let bob_key = YbPayload::max_bits(n, sig) + YtbPayload::max_bits(n, reply_sig);
        Self { alice_key, bob_key }
    }

    pub fn required_key_length(&self) -> usize {
        self.alice_key.max(self.bob_key)
    }
}
