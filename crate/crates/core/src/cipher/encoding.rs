//! Canonical bit layouts for classical protocol payloads.
//!
//! Signature payload layout:
//!
//! ```text
//! n                 32-bit big-endian count
//! bell[0..n]        2 bits each: psi+ 00, psi- 01, phi+ 10, phi- 11
//! entry[0..n]       1 basis bit (rectilinear 0) then four IEEE-754 binary64
//!                   values, big-endian: re(amp0) im(amp0) re(amp1) im(amp1)
//! ```

use num_complex::Complex64;

use crate::quantum::{Amplitude, BellOutcome, QubitSpec, NORM_TOLERANCE};

use super::bits::{BitReader, BitString};
use super::record::{BasisTag, RecordEntry, RotatedRecord};
use super::DecodeError;

pub const COUNT_BITS: usize = 32;
pub const BELL_BITS: usize = 2;
pub const AMPLITUDE_PAIR_BITS: usize = 256;
pub const RECORD_ENTRY_BITS: usize = 1 + AMPLITUDE_PAIR_BITS;
pub const DIGEST_BITS: usize = 256;

/// Bits of an encoded signature payload for `n` qubits.
pub fn signature_bits(n: usize) -> usize {
    COUNT_BITS + n * (BELL_BITS + RECORD_ENTRY_BITS)
}

/// Bell outcomes plus the secret record; the plaintext of a signature.
#[derive(Debug, Clone, PartialEq)]
pub struct SignaturePayload {
    pub bell_outcomes: Vec<BellOutcome>,
    pub record: RotatedRecord,
}

impl SignaturePayload {
    pub fn new(
        bell_outcomes: Vec<BellOutcome>,
        record: RotatedRecord,
    ) -> Result<Self, DecodeError> {
        if bell_outcomes.len() != record.len() {
            return Err(DecodeError::CountMismatch {
                expected: bell_outcomes.len(),
                found: record.len(),
            });
        }
        Ok(Self {
            bell_outcomes,
            record,
        })
    }

    pub fn len(&self) -> usize {
        self.bell_outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bell_outcomes.is_empty()
    }
}

pub(crate) fn check_count(value: usize) -> Result<u32, DecodeError> {
    u32::try_from(value).map_err(|_| DecodeError::CountOverflow(value))
}

pub(crate) fn push_amplitude(bits: &mut BitString, a: Amplitude) {
    bits.push_f64(a.re);
    bits.push_f64(a.im);
}

pub(crate) fn read_amplitude(r: &mut BitReader<'_>) -> Result<Amplitude, DecodeError> {
    let re = r.read_f64()?;
    let im = r.read_f64()?;
    if !re.is_finite() || !im.is_finite() {
        return Err(DecodeError::NonFinite);
    }
    Ok(Complex64::new(re, im))
}

/// Reads a count and checks that at least `count * unit_bits` bits follow.
pub(crate) fn read_count(r: &mut BitReader<'_>, unit_bits: usize) -> Result<usize, DecodeError> {
    let count = r.read_u32()? as usize;
    if count.saturating_mul(unit_bits) > r.remaining() {
        return Err(DecodeError::UnexpectedEnd {
            at: r.position(),
            needed: count.saturating_mul(unit_bits),
        });
    }
    Ok(count)
}

pub(crate) fn push_qubits(bits: &mut BitString, qubits: &[QubitSpec]) {
    for q in qubits {
        push_amplitude(bits, q.alpha());
        push_amplitude(bits, q.beta());
    }
}

pub(crate) fn read_qubits(r: &mut BitReader<'_>, n: usize) -> Result<Vec<QubitSpec>, DecodeError> {
    (0..n)
        .map(|_| {
            let alpha = read_amplitude(r)?;
            let beta = read_amplitude(r)?;
            QubitSpec::new(alpha, beta).map_err(|_| DecodeError::NotNormalized)
        })
        .collect()
}

pub(crate) fn push_signature(
    bits: &mut BitString,
    payload: &SignaturePayload,
) -> Result<(), DecodeError> {
    bits.push_u32(check_count(payload.len())?);
    for b in &payload.bell_outcomes {
        bits.push_uint(u64::from(b.code()), BELL_BITS as u32);
    }
    for e in &payload.record.entries {
        bits.push(e.tag.bit());
        push_amplitude(bits, e.amp0);
        push_amplitude(bits, e.amp1);
    }
    Ok(())
}

pub(crate) fn read_signature(r: &mut BitReader<'_>) -> Result<SignaturePayload, DecodeError> {
    let n = read_count(r, BELL_BITS + RECORD_ENTRY_BITS)?;
    let mut bell_outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        let code = r.read_uint(BELL_BITS as u32)? as u8;
        bell_outcomes.push(BellOutcome::from_code(code).ok_or(DecodeError::InvalidCode(code))?);
    }
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        let tag = BasisTag::from_bit(r.read_bit()?);
        let amp0 = read_amplitude(r)?;
        let amp1 = read_amplitude(r)?;
        let entry = RecordEntry { tag, amp0, amp1 };
        if (entry.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
            return Err(DecodeError::NotNormalized);
        }
        entries.push(entry);
    }
    Ok(SignaturePayload {
        bell_outcomes,
        record: RotatedRecord { entries },
    })
}

/// Encodes a signature payload in the canonical layout.
///
/// Panics only if the payload holds more than `u32::MAX` qubits.
pub fn encode_signature(payload: &SignaturePayload) -> BitString {
    let mut bits = BitString::new();
    push_signature(&mut bits, payload).expect("qubit count fits in 32 bits");
    bits
}

/// Strict inverse of [`encode_signature`]: rejects short input, trailing
/// bits, non-finite or unnormalized amplitudes.
pub fn decode_signature(bits: &BitString) -> Result<SignaturePayload, DecodeError> {
    let mut r = bits.reader();
    let payload = read_signature(&mut r)?;
    r.finish()?;
    Ok(payload)
}

/// Signature extended with a digest of Bob's forwarded message, used by the
/// undeniable flow.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiptSignaturePayload {
    pub signature: SignaturePayload,
    pub yb_digest: [u8; 32],
}

pub fn encode_receipt_signature(payload: &ReceiptSignaturePayload) -> BitString {
    let mut bits = encode_signature(&payload.signature);
    for byte in payload.yb_digest {
        bits.push_uint(u64::from(byte), 8);
    }
    bits
}

pub fn decode_receipt_signature(bits: &BitString) -> Result<ReceiptSignaturePayload, DecodeError> {
    let mut r = bits.reader();
    let signature = read_signature(&mut r)?;
    let mut yb_digest = [0u8; 32];
    for byte in &mut yb_digest {
        *byte = r.read_uint(8)? as u8;
    }
    r.finish()?;
    Ok(ReceiptSignaturePayload {
        signature,
        yb_digest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::record::transform_message;
    use proptest::prelude::*;

    fn single(bell: BellOutcome, tag: BasisTag) -> SignaturePayload {
        let record = transform_message(&[QubitSpec::zero()], &vec![tag].into()).unwrap();
        SignaturePayload::new(vec![bell], record).unwrap()
    }

    #[test]
    fn hand_computed_layout() {
        let bits = encode_signature(&single(BellOutcome::PsiPlus, BasisTag::Rectilinear));
        assert_eq!(bits.len(), signature_bits(1));
        let mut expected = BitString::new();
        expected.push_u32(1);
        expected.push_uint(0b00, 2);
        expected.push(false);
        expected.push_uint(1.0f64.to_bits(), 64);
        expected.push_uint(0, 64);
        expected.push_uint(0, 64);
        expected.push_uint(0, 64);
        assert_eq!(bits, expected);
        // 0x00000001 header.
        assert_eq!(&bits.to_bytes()[..4], &[0, 0, 0, 1]);
        // 1.0 = 0x3FF0...; begins at bit 35.
        assert_eq!(bits.slice(35..47).iter().filter(|b| *b).count(), 10);
    }

    #[test]
    fn single_outcome_change_is_local() {
        let a = encode_signature(&single(BellOutcome::PsiPlus, BasisTag::Diagonal));
        let b = encode_signature(&single(BellOutcome::PhiMinus, BasisTag::Diagonal));
        let diff: Vec<usize> = (0..a.len()).filter(|&i| a.get(i) != b.get(i)).collect();
        assert_eq!(diff, vec![32, 33]);
    }

    #[test]
    fn decode_rejects_malformed() {
        let bits = encode_signature(&single(BellOutcome::PsiMinus, BasisTag::Diagonal));
        let mut long = bits.clone();
        long.push(true);
        assert!(matches!(
            decode_signature(&long),
            Err(DecodeError::TrailingBits(1))
        ));
        assert!(decode_signature(&bits.slice(0..100)).is_err());
        let mut bad_count = bits.clone();
        bad_count.flip(0);
        assert!(decode_signature(&bad_count).is_err());
        let mut bad_amp = bits.clone();
        bad_amp.flip(36);
        assert_eq!(decode_signature(&bad_amp), Err(DecodeError::NotNormalized));
    }

    #[test]
    fn receipt_round_trip() {
        let payload = ReceiptSignaturePayload {
            signature: single(BellOutcome::PhiPlus, BasisTag::Diagonal),
            yb_digest: [7u8; 32],
        };
        let bits = encode_receipt_signature(&payload);
        assert_eq!(bits.len(), signature_bits(1) + DIGEST_BITS);
        assert_eq!(decode_receipt_signature(&bits).unwrap(), payload);
    }

    fn arb_qubit() -> impl Strategy<Value = QubitSpec> {
        (
            0.0f64..=1.0,
            0.0f64..std::f64::consts::TAU,
            0.0f64..std::f64::consts::TAU,
        )
            .prop_map(|(w, pa, pb)| {
                let a = Complex64::from_polar(w.sqrt(), pa);
                let b = Complex64::from_polar((1.0 - w).sqrt(), pb);
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                QubitSpec::new(a / norm, b / norm).unwrap()
            })
    }

    fn arb_payload() -> impl Strategy<Value = SignaturePayload> {
        prop::collection::vec((arb_qubit(), any::<bool>(), 0u8..4), 0..12).prop_map(|items| {
            let msg: Vec<QubitSpec> = items.iter().map(|i| i.0).collect();
            let tags: Vec<BasisTag> = items.iter().map(|i| BasisTag::from_bit(i.1)).collect();
            let bells = items
                .iter()
                .map(|i| BellOutcome::from_code(i.2).unwrap())
                .collect();
            let record = transform_message(&msg, &tags.into()).unwrap();
            SignaturePayload::new(bells, record).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn decode_inverts_encode(payload in arb_payload()) {
            let bits = encode_signature(&payload);
            prop_assert_eq!(bits.len(), signature_bits(payload.len()));
            let back = decode_signature(&bits).unwrap();
            prop_assert!(back.record.bit_identical(&payload.record));
            prop_assert_eq!(back.bell_outcomes, payload.bell_outcomes);
        }
    }
}
