//! One-time-pad encryption over key bits with reuse protection.

use std::collections::BTreeMap;

use super::bits::BitString;
use super::key::{KeyId, SecretKey};
use super::CipherError;

/// Ciphertext together with the key interval that padded it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherBlob {
    pub bits: BitString,
    pub pad_key_id: KeyId,
    pub pad_offset: usize,
}

impl CipherBlob {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Half-open key interval `[offset, offset + len)` used as pad.
    pub fn pad_interval(&self) -> std::ops::Range<usize> {
        self.pad_offset..self.pad_offset + self.len()
    }
}

fn xor_with_key(key: &BitString, offset: usize, data: &BitString) -> BitString {
    data.iter()
        .zip(key.as_slice()[offset..offset + data.len()].iter())
        .map(|(d, k)| d ^ k)
        .collect()
}

/// XORs `plaintext` with the next unused key bits and advances the cursor.
pub fn otp_encrypt(key: &mut SecretKey, plaintext: &BitString) -> Result<CipherBlob, CipherError> {
    let offset = key.take_pad(plaintext.len())?;
    Ok(CipherBlob {
        bits: xor_with_key(key.bits(), offset, plaintext),
        pad_key_id: key.id().clone(),
        pad_offset: offset,
    })
}

/// Recovers the plaintext of `blob`; the key cursor is left untouched.
pub fn otp_decrypt(key: &SecretKey, blob: &CipherBlob) -> Result<BitString, CipherError> {
    if &blob.pad_key_id != key.id() {
        return Err(CipherError::KeyMismatch {
            expected: key.id().clone(),
            found: blob.pad_key_id.clone(),
        });
    }
    if blob
        .pad_offset
        .checked_add(blob.len())
        .is_none_or(|end| end > key.len())
    {
        return Err(CipherError::IntervalOutOfRange {
            key: key.id().clone(),
            offset: blob.pad_offset,
            len: blob.len(),
        });
    }
    Ok(xor_with_key(key.bits(), blob.pad_offset, &blob.bits))
}

/// Checks that no key bit padded more than one blob.
pub fn audit_pad_usage<'a>(
    blobs: impl IntoIterator<Item = &'a CipherBlob>,
) -> Result<(), CipherError> {
    let mut by_key: BTreeMap<&KeyId, Vec<std::ops::Range<usize>>> = BTreeMap::new();
    for blob in blobs {
        if !blob.is_empty() {
            by_key
                .entry(&blob.pad_key_id)
                .or_default()
                .push(blob.pad_interval());
        }
    }
    for (key, mut intervals) in by_key {
        intervals.sort_by_key(|r| r.start);
        for pair in intervals.windows(2) {
            if pair[1].start < pair[0].end {
                return Err(CipherError::PadReuse {
                    key: key.clone(),
                    index: pair[1].start,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::generate_key;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitString {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn xor_definition() {
        let mut key = SecretKey::from_bits(KeyId::new("k"), bits("1100")).unwrap();
        let blob = otp_encrypt(&mut key, &bits("1010")).unwrap();
        assert_eq!(blob.bits, bits("0110"));
        assert_eq!(key.cursor(), 4);
    }

    #[test]
    fn round_trip_many() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut key = generate_key(KeyId::new("k"), 200_000, &mut rng).unwrap();
        for _ in 0..1000 {
            let len = rng.random_range(1..100);
            let m: BitString = (0..len).map(|_| rng.random::<bool>()).collect();
            let blob = otp_encrypt(&mut key, &m).unwrap();
            assert_eq!(otp_decrypt(&key, &blob).unwrap(), m);
        }
    }

    #[test]
    fn consecutive_pads_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut key = generate_key(KeyId::new("k"), 64, &mut rng).unwrap();
        let m = BitString::zeros(16);
        let a = otp_encrypt(&mut key, &m).unwrap();
        let b = otp_encrypt(&mut key, &m).unwrap();
        assert_eq!(a.pad_offset, 0);
        assert_eq!(b.pad_offset, 16);
        audit_pad_usage([&a, &b]).unwrap();
    }

    #[test]
    fn decrypt_zero_plaintext_and_bit_locality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut key = generate_key(KeyId::new("k"), 64, &mut rng).unwrap();
        let zero = BitString::zeros(32);
        let mut blob = otp_encrypt(&mut key, &zero).unwrap();
        assert_eq!(otp_decrypt(&key, &blob).unwrap(), zero);
        blob.bits.flip(7);
        let tampered = otp_decrypt(&key, &blob).unwrap();
        let changed: Vec<usize> = (0..32).filter(|&i| tampered.get(i) == Some(true)).collect();
        assert_eq!(changed, vec![7]);
    }

    #[test]
    fn decrypt_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = generate_key(KeyId::new("a"), 16, &mut rng).unwrap();
        let b = generate_key(KeyId::new("b"), 16, &mut rng).unwrap();
        let mut blob = otp_encrypt(&mut a, &BitString::zeros(8)).unwrap();
        assert!(matches!(
            otp_decrypt(&b, &blob),
            Err(CipherError::KeyMismatch { .. })
        ));
        blob.pad_offset = 12;
        assert!(matches!(
            otp_decrypt(&a, &blob),
            Err(CipherError::IntervalOutOfRange { .. })
        ));
    }

    #[test]
    fn exhaustion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut key = generate_key(KeyId::new("k"), 10, &mut rng).unwrap();
        otp_encrypt(&mut key, &BitString::zeros(6)).unwrap();
        let err = otp_encrypt(&mut key, &BitString::zeros(6)).unwrap_err();
        assert!(matches!(
            err,
            CipherError::PadExhausted {
                needed: 6,
                remaining: 4,
                ..
            }
        ));
        assert_eq!(key.cursor(), 6);
    }

    #[test]
    fn audit_detects_overlap() {
        let blob = |offset| CipherBlob {
            bits: BitString::zeros(8),
            pad_key_id: KeyId::new("k"),
            pad_offset: offset,
        };
        assert!(audit_pad_usage([&blob(0), &blob(8)]).is_ok());
        assert!(matches!(
            audit_pad_usage([&blob(0), &blob(4)]),
            Err(CipherError::PadReuse { index: 4, .. })
        ));
    }

    #[test]
    fn ciphertext_bits_look_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let plaintext: BitString = (0..16).map(|i| i % 3 == 0).collect();
        let mut ones = [0u32; 16];
        for _ in 0..10_000 {
            let mut key = generate_key(KeyId::new("k"), 16, &mut rng).unwrap();
            let blob = otp_encrypt(&mut key, &plaintext).unwrap();
            for (i, b) in blob.bits.iter().enumerate() {
                ones[i] += u32::from(b);
            }
        }
        for count in ones {
            let mean = f64::from(count) / 10_000.0;
            assert!((0.45..=0.55).contains(&mean));
        }
    }
}
