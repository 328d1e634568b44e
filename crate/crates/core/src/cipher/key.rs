use std::fmt;

use rand::Rng;

use super::bits::BitString;
use super::CipherError;

/// Opaque label naming a pre-shared key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeyId(String);

impl KeyId {
    pub fn new(label: impl Into<String>) -> Self {
        Self(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for KeyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Pre-shared random key with a one-time-pad cursor.
///
/// Bits before `cursor` have been spent on pads and are never handed out
/// again. Basis derivation reads the leading bits without moving the cursor.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretKey {
    id: KeyId,
    bits: BitString,
    cursor: usize,
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecretKey")
            .field("id", &self.id)
            .field("len", &self.bits.len())
            .field("cursor", &self.cursor)
            .finish_non_exhaustive()
    }
}

impl SecretKey {
    pub fn from_bits(id: KeyId, bits: BitString) -> Result<Self, CipherError> {
        if bits.is_empty() {
            return Err(CipherError::EmptyKey);
        }
        Ok(Self {
            id,
            bits,
            cursor: 0,
        })
    }

    pub fn id(&self) -> &KeyId {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.cursor
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    /// Reserves the next `len` pad bits and returns their start offset.
    pub(crate) fn take_pad(&mut self, len: usize) -> Result<usize, CipherError> {
        if len > self.remaining() {
            return Err(CipherError::PadExhausted {
                key: self.id.clone(),
                needed: len,
                remaining: self.remaining(),
            });
        }
        let start = self.cursor;
        self.cursor += len;
        Ok(start)
    }
}

/// Draws `length` uniform key bits.
pub fn generate_key<R: Rng + ?Sized>(
    id: KeyId,
    length: usize,
    rng: &mut R,
) -> Result<SecretKey, CipherError> {
    if length == 0 {
        return Err(CipherError::EmptyKey);
    }
    let bits = (0..length).map(|_| rng.random::<bool>()).collect();
    SecretKey::from_bits(id, bits)
}
