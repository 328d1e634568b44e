use std::fmt;

use super::DecodeError;

/// Ordered bit sequence; bit 0 is transmitted first.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.0.get(index).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        for shift in (0..width).rev() {
            self.0.push((value >> shift) & 1 == 1);
        }
    }

    pub fn push_u32(&mut self, value: u32) {
        self.push_uint(u64::from(value), 32);
    }

    pub fn push_f64(&mut self, value: f64) {
        self.push_uint(value.to_bits(), 64);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn flip(&mut self, index: usize) {
        self.0[index] = !self.0[index];
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> BitString {
        BitString(self.0[range].to_vec())
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    /// Packs bits MSB-first into bytes, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader {
            bits: &self.0,
            pos: 0,
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({} bits: ", self.len())?;
        for b in self.0.iter().take(64) {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        if self.len() > 64 {
            f.write_str("...")?;
        }
        f.write_str(")")
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

/// Sequential reader over a [`BitString`].
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, DecodeError> {
        Ok(self.read_uint(1)? == 1)
    }

    pub fn read_uint(&mut self, width: u32) -> Result<u64, DecodeError> {
        let width_bits = width as usize;
        if self.remaining() < width_bits {
            return Err(DecodeError::UnexpectedEnd {
                at: self.pos,
                needed: width_bits,
            });
        }
        let value = self.bits[self.pos..self.pos + width_bits]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        self.pos += width_bits;
        Ok(value)
    }

    pub fn read_u32(&mut self) -> Result<u32, DecodeError> {
        Ok(self.read_uint(32)? as u32)
    }

    pub fn read_f64(&mut self) -> Result<f64, DecodeError> {
        Ok(f64::from_bits(self.read_uint(64)?))
    }

    pub fn read_bits(&mut self, len: usize) -> Result<BitString, DecodeError> {
        if self.remaining() < len {
            return Err(DecodeError::UnexpectedEnd {
                at: self.pos,
                needed: len,
            });
        }
        let out = BitString(self.bits[self.pos..self.pos + len].to_vec());
        self.pos += len;
        Ok(out)
    }

    /// Fails unless every bit has been consumed.
    pub fn finish(self) -> Result<(), DecodeError> {
        match self.remaining() {
            0 => Ok(()),
            extra => Err(DecodeError::TrailingBits(extra)),
        }
    }
}
