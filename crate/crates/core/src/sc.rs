//! Successive cancellation decoding over the min-sum f/g graph.
//!
//! The decoder walks the binary code tree depth first. Each tree level
//! owns one LLR scratch slot sized to the span of a node at that level, so
//! the whole LLR workspace is 2N − 1 values; the partial-sum workspace
//! mirrors that layout with one bit per slot. Both are allocated once per
//! decoder instance and reused across decode attempts, giving the O(N)
//! memory footprint that repeated flip attempts rely on.
//!
//! LLR sign convention: positive favors bit 0. A decision LLR of exactly
//! zero decides 0, and `f_update` treats sign(0) as +1.

use crate::bits::BitBlock;
use crate::construction::PolarCode;
use crate::error::{Error, Result};

/// Channel LLRs are clamped to this magnitude on ingest so that perfect
/// channels stay finite inside the graph.
pub const LLR_SATURATION: f64 = 300.0;

/// Min-sum check-node update: sign(L1)·sign(L2)·min(|L1|, |L2|).
#[inline]
pub fn f_update(l1: f64, l2: f64) -> f64 {
    let sign = if (l1 < 0.0) != (l2 < 0.0) { -1.0 } else { 1.0 };
    sign * l1.abs().min(l2.abs())
}

/// Variable-node update with decision feedback: (−1)^u · L1 + L2.
#[inline]
pub fn g_update(l1: f64, l2: f64, u: u8) -> f64 {
    if u == 0 {
        l1 + l2
    } else {
        l2 - l1
    }
}

/// Partial-sum pair rule: the left output is the XOR of the pair, the
/// right output is the even (second) member.
#[inline]
pub fn partial_sum_pair(first: u8, second: u8) -> (u8, u8) {
    (first ^ second, second)
}

/// Propagates the re-encoded bits of two sibling subtrees one stage down:
/// `out[j] = left[j] ^ right[j]`, `out[half + j] = right[j]`.
pub fn combine_partial_sums(left: &[u8], right: &[u8], out: &mut [u8]) {
    debug_assert_eq!(left.len(), right.len());
    debug_assert_eq!(out.len(), left.len() * 2);
    let half = left.len();
    for j in 0..half {
        let (xor, even) = partial_sum_pair(left[j], right[j]);
        out[j] = xor;
        out[half + j] = even;
    }
}

/// Channel LLRs for one received frame, saturated on ingest.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    llrs: Vec<f64>,
}

impl LlrFrame {
    /// Wraps channel LLRs, clamping magnitudes to [`LLR_SATURATION`] and
    /// rejecting NaN.
    pub fn new(llrs: Vec<f64>) -> Result<Self> {
        let mut llrs = llrs;
        for (i, value) in llrs.iter_mut().enumerate() {
            if value.is_nan() {
                return Err(Error::NanLlr(i));
            }
            *value = value.clamp(-LLR_SATURATION, LLR_SATURATION);
        }
        Ok(Self { llrs })
    }

    pub fn len(&self) -> usize {
        self.llrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llrs.is_empty()
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llrs
    }
}

/// Result of one SC pass.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    /// Estimated input vector û of length N.
    pub u_hat: BitBlock,
    /// |decision LLR| for each non-frozen index, in ascending index order.
    pub decision_magnitudes: Vec<f64>,
    /// Number of f plus g evaluations performed; exactly N·log2(N) per pass.
    pub node_activations: u64,
    /// Forced-flip index (1-based) if one was applied.
    pub flipped_index: Option<usize>,
}

/// How non-frozen decisions are taken at the leaves.
pub(crate) trait DecisionPolicy {
    /// `index` is 0-based; `hard` is the plain sign decision of the LLR.
    fn decide(&mut self, index: usize, llr: f64, hard: u8) -> u8;
}

struct StandardPolicy {
    flip_at: Option<usize>,
}

impl DecisionPolicy for StandardPolicy {
    #[inline]
    fn decide(&mut self, index: usize, _llr: f64, hard: u8) -> u8 {
        if self.flip_at == Some(index) {
            1 - hard
        } else {
            hard
        }
    }
}

/// A reusable SC decoder bound to one code.
pub struct ScDecoder {
    code: PolarCode,
    /// Per-level LLR scratch; level ℓ (span 2^ℓ) starts at 2(N − 2^ℓ).
    llr: Vec<f64>,
    /// Partial sums in the same layout; slot ℓ holds the re-encoded bits
    /// of the subtree most recently completed at that level.
    psum: Vec<u8>,
    activations: u64,
    magnitudes: Vec<f64>,
}

impl ScDecoder {
    pub fn new(code: &PolarCode) -> Self {
        let n = code.block_len();
        Self {
            code: code.clone(),
            llr: vec![0.0; 2 * n - 1],
            psum: vec![0; 2 * n - 1],
            activations: 0,
            magnitudes: Vec::with_capacity(code.info_bits()),
        }
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    /// LLR workspace capacity in values (2N − 1).
    pub fn llr_workspace_len(&self) -> usize {
        self.llr.len()
    }

    /// Partial-sum workspace capacity in bits (2N − 1).
    pub fn partial_sum_workspace_len(&self) -> usize {
        self.psum.len()
    }

    /// Decodes one frame. `flip_at` (1-based) inverts the sign decision at
    /// that index before it is fed back as a partial sum.
    pub fn decode(&mut self, frame: &LlrFrame, flip_at: Option<usize>) -> Result<DecodeOutcome> {
        if let Some(idx) = flip_at {
            let n = self.code.block_len();
            if idx < 1 || idx > n || !self.code.is_info(idx - 1) {
                return Err(Error::FlipIndex(idx));
            }
        }
        let mut policy = StandardPolicy {
            flip_at: flip_at.map(|i| i - 1),
        };
        let mut outcome = self.decode_with(frame, &mut policy)?;
        outcome.flipped_index = flip_at;
        Ok(outcome)
    }

    /// Runs a full SC pass with a caller-supplied decision policy.
    pub(crate) fn decode_with<P: DecisionPolicy>(
        &mut self,
        frame: &LlrFrame,
        policy: &mut P,
    ) -> Result<DecodeOutcome> {
        let n = self.code.block_len();
        if frame.len() != n {
            return Err(Error::BlockLength {
                expected: n,
                got: frame.len(),
            });
        }
        let stages = self.code.block_exponent() as usize;
        self.llr[..n].copy_from_slice(frame.llrs());
        self.activations = 0;
        self.magnitudes.clear();

        let mut u_hat = BitBlock::zeros(n);
        self.walk(stages, 0, policy, &mut u_hat);

        Ok(DecodeOutcome {
            u_hat,
            decision_magnitudes: self.magnitudes.clone(),
            node_activations: self.activations,
            flipped_index: None,
        })
    }

    /// Re-encoded codeword from the last decode: the stage-0 partial sums,
    /// which equal `polar_transform(û)`.
    pub fn reencoded_codeword(&self) -> BitBlock {
        let n = self.code.block_len();
        BitBlock::from_bits(self.psum[..n].to_vec()).unwrap()
    }

    #[inline]
    fn slot_offset(&self, level: usize) -> usize {
        2 * (self.code.block_len() - (1 << level))
    }

    fn walk<P: DecisionPolicy>(
        &mut self,
        level: usize,
        u_base: usize,
        policy: &mut P,
        u_hat: &mut BitBlock,
    ) {
        if level == 0 {
            let offset = self.slot_offset(0);
            let llr = self.llr[offset];
            let bit = if self.code.is_info(u_base) {
                let hard = u8::from(llr < 0.0);
                self.magnitudes.push(llr.abs());
                policy.decide(u_base, llr, hard)
            } else {
                self.code.frozen_value(u_base)
            };
            u_hat.set(u_base, bit);
            self.psum[offset] = bit;
            return;
        }

        let half = 1usize << (level - 1);
        let parent = self.slot_offset(level);
        let child = self.slot_offset(level - 1);

        // parent slots sit strictly before child slots in the flat buffer
        let (upper, lower) = self.llr.split_at_mut(child);
        for j in 0..half {
            lower[j] = f_update(upper[parent + j], upper[parent + half + j]);
        }
        self.activations += half as u64;
        self.walk(level - 1, u_base, policy, u_hat);

        // stash the left subtree's re-encoded bits in the parent slot
        let (psum_upper, psum_lower) = self.psum.split_at_mut(child);
        psum_upper[parent..parent + half].copy_from_slice(&psum_lower[..half]);

        let (upper, lower) = self.llr.split_at_mut(child);
        for j in 0..half {
            lower[j] = g_update(
                upper[parent + j],
                upper[parent + half + j],
                self.psum[parent + j],
            );
        }
        self.activations += half as u64;
        self.walk(level - 1, u_base + half, policy, u_hat);

        let (psum_upper, psum_lower) = self.psum.split_at_mut(child);
        for j in 0..half {
            let (xor, even) = partial_sum_pair(psum_upper[parent + j], psum_lower[j]);
            psum_upper[parent + j] = xor;
            psum_upper[parent + half + j] = even;
        }
    }
}
