//! Fixed-length bit vectors.
//!
//! Bits are stored one per byte with values in {0, 1}. Positions are
//! 0-based; the 1-based channel index sets used elsewhere are converted at
//! the call sites that consume them.

use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// A bit vector with explicit length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock {
    bits: Vec<u8>,
}

impl BitBlock {
    /// All-zero block of the given length.
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// Builds a block from raw bits, rejecting values other than 0 and 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::BitValue(bad));
        }
        Ok(Self { bits })
    }

    /// Unpacks the first `len` bits of a byte slice, MSB first.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() * 8 < len {
            return Err(Error::HexLength {
                need: len,
                got: bytes.len() * 8,
            });
        }
        let bits = (0..len)
            .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
            .collect();
        Ok(Self { bits })
    }

    /// Parses a hex string into `len` bits (MSB-first nibbles; any trailing
    /// pad bits beyond `len` are ignored).
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars() {
            let nibble = ch.to_digit(16).ok_or(Error::HexDigit(ch))? as u8;
            for shift in (0..4).rev() {
                bits.push((nibble >> shift) & 1);
            }
        }
        if bits.len() < len {
            return Err(Error::HexLength {
                need: len,
                got: bits.len(),
            });
        }
        bits.truncate(len);
        Ok(Self { bits })
    }

    /// Hex rendering, MSB-first, zero-padded at the end to a whole nibble.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.bits.len().div_ceil(4));
        for chunk in self.bits.chunks(4) {
            let mut nibble = 0u8;
            for (pos, &b) in chunk.iter().enumerate() {
                nibble |= b << (3 - pos);
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> u8 {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits[index] = bit;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u8> {
        self.bits.iter()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl From<BitBlock> for Vec<u8> {
    fn from(block: BitBlock) -> Self {
        block.bits
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock(len={}, {})", self.bits.len(), self.to_hex())
    }
}

// Reports carry bit blocks as hex strings. Parsing back requires the bit
// count, which the surrounding config always supplies, so only Serialize
// is derived here.
impl Serialize for BitBlock {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}
