//! Bit-serial cyclic redundancy checks.
//!
//! The register is processed MSB-first with no input or output reflection.
//! Width 0 is the "no CRC" spec used by codes with r = 0.

use serde::{Deserialize, Serialize};

use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Generator parameters for an r-bit CRC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcSpec {
    width: usize,
    poly: u64,
    init: u64,
    xor_out: u64,
}

impl CrcSpec {
    /// Builds a spec, rejecting widths outside 1..=64.
    pub fn new(width: usize, poly: u64, init: u64, xor_out: u64) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::CrcWidth(width));
        }
        let mask = Self::mask_for(width);
        Ok(Self {
            width,
            poly: poly & mask,
            init: init & mask,
            xor_out: xor_out & mask,
        })
    }

    /// The degenerate zero-width spec: no checksum, every check passes.
    pub fn none() -> Self {
        Self {
            width: 0,
            poly: 0,
            init: 0,
            xor_out: 0,
        }
    }

    /// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no final XOR.
    pub fn ccitt_false() -> Self {
        Self::new(16, 0x1021, 0xFFFF, 0).unwrap()
    }

    /// A conventional polynomial for the given width, or an error if none
    /// is registered.
    pub fn default_for_width(width: usize) -> Result<Self> {
        match width {
            0 => Ok(Self::none()),
            8 => Self::new(8, 0x07, 0x00, 0x00),
            16 => Ok(Self::ccitt_false()),
            24 => Self::new(24, 0x86_4CFB, 0xB7_04CE, 0x00),
            32 => Self::new(32, 0x04C1_1DB7, 0xFFFF_FFFF, 0x00),
            other => Err(Error::CrcDefault(other)),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn init(&self) -> u64 {
        self.init
    }

    pub fn xor_out(&self) -> u64 {
        self.xor_out
    }

    fn mask_for(width: usize) -> u64 {
        if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        }
    }

    /// Runs the message bits through the division register and returns the
    /// final register value.
    pub fn checksum_value(&self, message: &[u8]) -> u64 {
        if self.width == 0 {
            return 0;
        }
        let mask = Self::mask_for(self.width);
        let top = 1u64 << (self.width - 1);
        let mut reg = self.init;
        for &bit in message {
            let feedback = ((reg & top) != 0) ^ (bit == 1);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly;
            }
        }
        reg ^ self.xor_out
    }

    /// Checksum as a bit block of length `width`, MSB first.
    pub fn checksum(&self, message: &BitBlock) -> BitBlock {
        let value = self.checksum_value(message.as_slice());
        let bits = (0..self.width)
            .map(|j| ((value >> (self.width - 1 - j)) & 1) as u8)
            .collect();
        BitBlock::from_bits(bits).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ascii_bits(text: &str) -> BitBlock {
        BitBlock::from_bytes(text.as_bytes(), text.len() * 8).unwrap()
    }

    #[test]
    fn ccitt_false_check_value() {
        // Published check value for the nine ASCII digits.
        let spec = CrcSpec::ccitt_false();
        assert_eq!(
            spec.checksum_value(ascii_bits("123456789").as_slice()),
            0x29B1
        );
    }

    #[test]
    fn registered_widths_match_published_check_values() {
        // CRC-8 (SMBus), CRC-24 (OpenPGP), CRC-32 (MPEG-2)
        let message = ascii_bits("123456789");
        for (width, check) in [(8usize, 0xF4u64), (24, 0x21CF02), (32, 0x0376E6E7)] {
            let spec = CrcSpec::default_for_width(width).unwrap();
            assert_eq!(
                spec.checksum_value(message.as_slice()),
                check,
                "width {width}"
            );
        }
    }

    #[test]
    fn empty_message_keeps_init() {
        let spec = CrcSpec::ccitt_false();
        assert_eq!(spec.checksum_value(&[]), 0xFFFF);
    }

    #[test]
    fn checksum_bits_match_value() {
        let spec = CrcSpec::ccitt_false();
        let crc = spec.checksum(&ascii_bits("123456789"));
        assert_eq!(crc.len(), 16);
        assert_eq!(crc.to_hex(), "29b1");
    }

    #[test]
    fn zero_width_is_vacuous() {
        let spec = CrcSpec::none();
        assert_eq!(spec.width(), 0);
        assert!(spec.checksum(&BitBlock::zeros(12)).is_empty());
    }

    #[test]
    fn rejects_unsupported_widths() {
        assert!(CrcSpec::new(0, 0x7, 0, 0).is_err());
        assert!(CrcSpec::new(65, 0x7, 0, 0).is_err());
        assert!(CrcSpec::default_for_width(10).is_err());
    }

    #[test]
    fn single_bit_flips_change_checksum() {
        let spec = CrcSpec::ccitt_false();
        let message = ascii_bits("polar");
        let reference = spec.checksum_value(message.as_slice());
        for i in 0..message.len() {
            let mut flipped = message.clone();
            flipped.set(i, 1 - flipped.get(i));
            assert_ne!(spec.checksum_value(flipped.as_slice()), reference);
        }
    }

    #[test]
    fn short_bursts_are_detected() {
        use rand::{Rng, SeedableRng};
        let spec = CrcSpec::ccitt_false();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let len = 40 + rng.random_range(0..40);
            let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
            let message = BitBlock::from_bits(bits).unwrap();
            let reference = spec.checksum_value(message.as_slice());

            let burst_len = 1 + rng.random_range(0..spec.width());
            let start = rng.random_range(0..len - burst_len + 1);
            let mut corrupted = message.clone();
            // flip both end bits so the burst length is exact
            corrupted.set(start, 1 - corrupted.get(start));
            for i in start + 1..start + burst_len - 1 {
                if rng.random_range(0..2) == 1 {
                    corrupted.set(i, 1 - corrupted.get(i));
                }
            }
            if burst_len > 1 {
                let last = start + burst_len - 1;
                corrupted.set(last, 1 - corrupted.get(last));
            }
            assert_ne!(spec.checksum_value(corrupted.as_slice()), reference);
        }
    }
}
