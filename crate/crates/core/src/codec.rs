//! Encoding: the polar transform, payload/CRC placement and CRC checking.

use crate::bits::BitBlock;
use crate::construction::PolarCode;
use crate::crc::CrcSpec;
use crate::error::{Error, Result};

/// Applies the transform u·F^{⊗n} in place with the XOR butterfly.
///
/// Natural bit order, no bit-reversal permutation; the decoder graph uses
/// the matching convention. The transform is its own inverse over GF(2).
pub fn polar_transform(block: &mut BitBlock) -> Result<()> {
    let n = block.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let bits = block.as_mut_slice();
    let mut half = 1;
    while half < n {
        let step = half * 2;
        for base in (0..n).step_by(step) {
            for j in 0..half {
                bits[base + j] ^= bits[base + j + half];
            }
        }
        half = step;
    }
    Ok(())
}

/// Builds the length-N input vector u: payload then CRC bits placed into
/// the non-frozen positions in ascending index order, frozen values
/// elsewhere.
pub fn assemble_u(payload: &BitBlock, code: &PolarCode, crc: &CrcSpec) -> Result<BitBlock> {
    if payload.len() != code.payload_bits() {
        return Err(Error::BlockLength {
            expected: code.payload_bits(),
            got: payload.len(),
        });
    }
    if crc.width() != code.crc_bits() {
        return Err(Error::CrcMismatch {
            crc: crc.width(),
            r: code.crc_bits(),
        });
    }
    let checksum = crc.checksum(payload);
    let mut u = BitBlock::zeros(code.block_len());
    for (slot, &idx) in code.info_set().iter().enumerate() {
        let bit = if slot < payload.len() {
            payload.get(slot)
        } else {
            checksum.get(slot - payload.len())
        };
        u.set(idx - 1, bit);
    }
    for (&idx, &value) in code.frozen_set().iter().zip(code.frozen_values()) {
        u.set(idx - 1, value);
    }
    Ok(u)
}

/// Convenience: assemble and transform in one step, returning the codeword.
pub fn encode(payload: &BitBlock, code: &PolarCode, crc: &CrcSpec) -> Result<BitBlock> {
    let mut u = assemble_u(payload, code, crc)?;
    polar_transform(&mut u)?;
    Ok(u)
}

/// Recomputes the CRC over the decoded payload bits and compares it with
/// the received CRC bits. Returns `true` on a match; vacuously true for
/// r = 0.
pub fn check_crc(u_hat: &BitBlock, code: &PolarCode, crc: &CrcSpec) -> Result<bool> {
    if u_hat.len() != code.block_len() {
        return Err(Error::BlockLength {
            expected: code.block_len(),
            got: u_hat.len(),
        });
    }
    if crc.width() != code.crc_bits() {
        return Err(Error::CrcMismatch {
            crc: crc.width(),
            r: code.crc_bits(),
        });
    }
    if code.crc_bits() == 0 {
        return Ok(true);
    }
    let payload = extract_payload(u_hat, code);
    let mut received = Vec::with_capacity(code.crc_bits());
    for &idx in &code.info_set()[code.payload_bits()..] {
        received.push(u_hat.get(idx - 1));
    }
    Ok(crc.checksum(&payload).as_slice() == received.as_slice())
}

/// Reads the payload bits back out of a (decoded) input vector.
pub fn extract_payload(u_hat: &BitBlock, code: &PolarCode) -> BitBlock {
    let bits = code.info_set()[..code.payload_bits()]
        .iter()
        .map(|&idx| u_hat.get(idx - 1))
        .collect();
    BitBlock::from_bits(bits).unwrap()
}
