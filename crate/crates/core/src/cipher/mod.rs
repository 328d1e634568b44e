//! Pre-shared keys, key-derived bases, the secret record, payload encodings
//! and the one-time pad.

mod bits;
mod encoding;
mod key;
mod otp;
mod record;

use thiserror::Error;

pub use bits::{BitReader, BitString};
pub(crate) use encoding::{check_count, push_qubits, read_count, read_qubits};
pub use encoding::{
    decode_receipt_signature, decode_signature, encode_receipt_signature, encode_signature,
    signature_bits, ReceiptSignaturePayload, SignaturePayload, AMPLITUDE_PAIR_BITS, BELL_BITS,
    COUNT_BITS, DIGEST_BITS, RECORD_ENTRY_BITS,
};
pub use key::{generate_key, KeyId, SecretKey};
pub use otp::{audit_pad_usage, otp_decrypt, otp_encrypt, CipherBlob};
pub use record::{
    derive_bases, records_equal, transform_message, BasisSequence, BasisTag, RecordEntry,
    RotatedRecord,
};

/// Default tolerance for [`records_equal`].
pub const RECORD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("payload ends at bit {at}; {needed} more bits expected")]
    UnexpectedEnd { at: usize, needed: usize },
    #[error("{0} unexpected trailing bits")]
    TrailingBits(usize),
    #[error("invalid outcome code {0}")]
    InvalidCode(u8),
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("amplitude pair is not normalized")]
    NotNormalized,
    #[error("count mismatch: expected {expected}, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("count {0} does not fit the 32-bit header")]
    CountOverflow(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CipherError {
    #[error("keys must hold at least one bit")]
    EmptyKey,
    #[error("key holds {available} bits, {needed} required")]
    KeyTooShort { needed: usize, available: usize },
    #[error("pad exhausted on key {key}: {needed} bits needed, {remaining} left")]
    PadExhausted {
        key: KeyId,
        needed: usize,
        remaining: usize,
    },
    #[error("ciphertext was padded with key {found}, not {expected}")]
    KeyMismatch { expected: KeyId, found: KeyId },
    #[error("pad interval at {offset} (+{len}) lies outside key {key}")]
    IntervalOutOfRange {
        key: KeyId,
        offset: usize,
        len: usize,
    },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("key {key} bit {index} padded more than one ciphertext")]
    PadReuse { key: KeyId, index: usize },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}
