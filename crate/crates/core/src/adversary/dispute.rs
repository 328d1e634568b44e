//! The arbitrator's rulings on disavowal and denial of receipt.

use crate::cipher::{otp_decrypt, CipherBlob, SecretKey};
use crate::protocol::{arbitrator_check, blob_digest, MessageString, ReceiptEvidence, YbPayload};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisputeVerdict {
    SignedByAlice,
    NotSignedByAlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiptVerdict {
    ReceivedByBob,
    NotReceivedByBob,
}

/// Rules that Alice signed `claimed` iff the signature decrypts under K_a to
/// a well-formed payload whose record matches the claimed message.
pub fn resolve_dispute(
    signature: &CipherBlob,
    k_a: &SecretKey,
    claimed: &MessageString,
) -> DisputeVerdict {
    if arbitrator_check(k_a, signature, claimed, None).gamma {
        DisputeVerdict::SignedByAlice
    } else {
        DisputeVerdict::NotSignedByAlice
    }
}

/// Rules that Bob received `claimed` iff his request decrypts under K_b to a
/// request for that message and Alice's binding signature matches both the
/// message and a digest of that request.
pub fn resolve_receipt_dispute(
    evidence: &ReceiptEvidence,
    k_a: &SecretKey,
    k_b: &SecretKey,
    claimed: &MessageString,
) -> ReceiptVerdict {
    let request = otp_decrypt(k_b, &evidence.yb)
        .ok()
        .and_then(|bits| YbPayload::decode(&bits).ok());
    let request_ok = request.is_some_and(|r| &r.message == claimed);
    let bound = arbitrator_check(
        k_a,
        &evidence.signature,
        claimed,
        Some(blob_digest(&evidence.yb)),
    )
    .gamma;
    if request_ok && bound {
        ReceiptVerdict::ReceivedByBob
    } else {
        ReceiptVerdict::NotReceivedByBob
    }
}
