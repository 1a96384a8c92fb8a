//! BPSK over AWGN with per-frame reproducible noise streams.
//!
//! Bit 0 maps to +1.0, bit 1 to −1.0, and channel LLRs are 2y/σ² so a
//! positive LLR favors bit 0. The noise generator is a ChaCha stream
//! seeded from the channel seed with the frame index as the stream id, so
//! any frame can be regenerated independently and decoders can be compared
//! on matched noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitBlock;
use crate::error::{Error, Result};
use crate::sc::{LlrFrame, LLR_SATURATION};

/// Modulation and noise parameters for one Eb/N0 operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub ebn0_db: f64,
    /// Rate used in the energy conversion (the payload rate k/N by
    /// default; see [`crate::sim::RateConvention`]).
    #[serde(rename = "rate")]
    pub effective_rate: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(ebn0_db: f64, effective_rate: f64, seed: u64) -> Result<Self> {
        if !ebn0_db.is_finite() {
            return Err(Error::DesignSnr(ebn0_db));
        }
        if !(effective_rate > 0.0 && effective_rate < 1.0) {
            return Err(Error::Rate(effective_rate));
        }
        Ok(Self {
            ebn0_db,
            effective_rate,
            seed,
        })
    }

    /// Noise variance per real dimension: 1 / (2 · rate · 10^(Eb/N0 / 10)).
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.effective_rate * 10f64.powf(self.ebn0_db / 10.0))
    }

    /// The ChaCha stream dedicated to one frame index.
    pub fn frame_rng(&self, frame_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(frame_index);
        rng
    }
}

/// BPSK mapping: 0 → +1.0, 1 → −1.0.
pub fn modulate(x: &BitBlock) -> Vec<f64> {
    x.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Box–Muller standard normal pair from the uniform stream.
#[inline]
fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Draws `len` N(0, σ²) samples.
pub fn noise_vector<R: Rng>(rng: &mut R, len: usize, noise_variance: f64) -> Vec<f64> {
    let sigma = noise_variance.sqrt();
    let mut noise = Vec::with_capacity(len + 1);
    while noise.len() < len {
        let (a, b) = normal_pair(rng);
        noise.push(a * sigma);
        noise.push(b * sigma);
    }
    noise.truncate(len);
    noise
}

/// Adds an explicit noise vector to the modulated codeword and converts to
/// LLRs 2y/σ².
pub fn transmit_with_noise(x: &BitBlock, noise: &[f64], noise_variance: f64) -> Result<LlrFrame> {
    if noise.len() != x.len() {
        return Err(Error::BlockLength {
            expected: x.len(),
            got: noise.len(),
        });
    }
    let scale = 2.0 / noise_variance;
    let llrs = modulate(x)
        .iter()
        .zip(noise)
        .map(|(&s, &w)| scale * (s + w))
        .collect();
    LlrFrame::new(llrs)
}

/// Transmits a codeword over the seeded AWGN channel. Deterministic for a
/// given `(spec, frame_index)` pair.
pub fn transmit(x: &BitBlock, spec: &ChannelSpec, frame_index: u64) -> Result<LlrFrame> {
    let mut rng = spec.frame_rng(frame_index);
    transmit_rng(x, spec, &mut rng)
}

/// Transmit variant that continues an existing RNG stream.
pub fn transmit_rng<R: Rng>(x: &BitBlock, spec: &ChannelSpec, rng: &mut R) -> Result<LlrFrame> {
    let variance = spec.noise_variance();
    let noise = noise_vector(rng, x.len(), variance);
    transmit_with_noise(x, &noise, variance)
}

/// Noise-free transmission: every LLR saturates to ±[`LLR_SATURATION`].
pub fn transmit_noiseless(x: &BitBlock) -> LlrFrame {
    let llrs = x
        .iter()
        .map(|&b| {
            if b == 0 {
                LLR_SATURATION
            } else {
                -LLR_SATURATION
            }
        })
        .collect();
    LlrFrame::new(llrs).unwrap()
}
