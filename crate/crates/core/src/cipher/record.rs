//! Key-selected measurement bases and the secret record they produce.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::quantum::{fidelity, Amplitude, QubitSpec};

use super::key::SecretKey;
use super::CipherError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    Rectilinear,
    Diagonal,
}

impl BasisTag {
    /// Wire bit: Rectilinear is 0.
    pub fn bit(self) -> bool {
        matches!(self, BasisTag::Diagonal)
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            BasisTag::Diagonal
        } else {
            BasisTag::Rectilinear
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSequence(Vec<BasisTag>);

impl BasisSequence {
    pub fn tags(&self) -> &[BasisTag] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<BasisTag>> for BasisSequence {
    fn from(tags: Vec<BasisTag>) -> Self {
        Self(tags)
    }
}

/// Maps the first `n` key bits to bases: 1 is diagonal, 0 is rectilinear.
/// Reads only; the pad cursor does not move.
pub fn derive_bases(key: &SecretKey, n: usize) -> Result<BasisSequence, CipherError> {
    if key.len() < n {
        return Err(CipherError::KeyTooShort {
            needed: n,
            available: key.len(),
        });
    }
    Ok(BasisSequence(
        key.bits().iter().take(n).map(BasisTag::from_bit).collect(),
    ))
}

/// One qubit of the record: its basis and the amplitudes in that basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordEntry {
    pub tag: BasisTag,
    pub amp0: Amplitude,
    pub amp1: Amplitude,
}

impl RecordEntry {
    fn rotate(tag: BasisTag, a: Amplitude, b: Amplitude) -> (Amplitude, Amplitude) {
        match tag {
            BasisTag::Rectilinear => (a, b),
            BasisTag::Diagonal => ((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2),
        }
    }

    /// Undoes the basis change, returning computational-basis amplitudes.
    /// The diagonal rotation is its own inverse.
    pub fn to_computational(&self) -> (Amplitude, Amplitude) {
        Self::rotate(self.tag, self.amp0, self.amp1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    fn bits(&self) -> [u64; 4] {
        [
            self.amp0.re.to_bits(),
            self.amp0.im.to_bits(),
            self.amp1.re.to_bits(),
            self.amp1.im.to_bits(),
        ]
    }
}

/// Deterministic image of the message string under the key-selected bases.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RotatedRecord {
    pub entries: Vec<RecordEntry>,
}

impl RotatedRecord {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same tags and bit-for-bit identical amplitudes.
    pub fn bit_identical(&self, other: &RotatedRecord) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.tag == b.tag && a.bits() == b.bits())
    }
}

/// Rewrites every message qubit in its key-selected basis.
pub fn transform_message(
    message: &[QubitSpec],
    bases: &BasisSequence,
) -> Result<RotatedRecord, CipherError> {
    if message.len() != bases.len() {
        return Err(CipherError::LengthMismatch {
            left: message.len(),
            right: bases.len(),
        });
    }
    let entries = message
        .iter()
        .zip(bases.tags())
        .map(|(p, &tag)| {
            let (amp0, amp1) = RecordEntry::rotate(tag, p.alpha(), p.beta());
            RecordEntry { tag, amp0, amp1 }
        })
        .collect();
    Ok(RotatedRecord { entries })
}

/// Equal lengths, equal tags and per-entry fidelity at least `1 - tolerance`.
pub fn records_equal(a: &RotatedRecord, b: &RotatedRecord, tolerance: f64) -> bool {
    a.len() == b.len()
        && a.entries.iter().zip(&b.entries).all(|(x, y)| {
            if x.tag != y.tag {
                return false;
            }
            let (Ok(sx), Ok(sy)) = (entry_state(x), entry_state(y)) else {
                return false;
            };
            fidelity(&sx, &sy).is_ok_and(|f| f >= 1.0 - tolerance)
        })
}

fn entry_state(e: &RecordEntry) -> Result<crate::quantum::PureState, crate::quantum::QuantumError> {
    Ok(QubitSpec::new(e.amp0, e.amp1)?.to_state())
}
