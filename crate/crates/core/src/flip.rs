//! CRC-aided SC flip decoding and the oracle-assisted reference decoders.
//!
//! The flip decoder re-runs SC after a CRC failure, each time inverting
//! one of the least reliable initial decisions. The oracle decoders use
//! knowledge of the transmitted bits to separate channel-caused errors
//! from error propagation: one corrects and counts every erroneous
//! decision, the other intervenes exactly once at the first error.

use crate::bits::BitBlock;
use crate::codec::check_crc;
use crate::construction::PolarCode;
use crate::crc::CrcSpec;
use crate::error::{Error, Result};
use crate::sc::{DecisionPolicy, DecodeOutcome, LlrFrame, ScDecoder};

/// Result of an SC flip decode.
#[derive(Debug, Clone)]
pub struct FlipResult {
    /// Final estimated input vector (of the last attempt on total failure).
    pub u_hat: BitBlock,
    /// Whether the returned codeword passed the CRC.
    pub crc_pass: bool,
    /// Re-decodes performed after the initial pass (0..=max_trials).
    pub attempts_used: u32,
    /// Flip candidates from the initial pass, ordered by ascending
    /// decision-LLR magnitude (1-based indices).
    pub flip_candidates: Vec<usize>,
    /// f/g evaluations summed over all passes.
    pub total_activations: u64,
    /// CRC evaluations performed (reported separately from f/g work).
    pub crc_checks: u32,
}

impl FlipResult {
    /// Whether the initial SC pass already failed the CRC.
    pub fn initial_crc_failed(&self) -> bool {
        self.attempts_used > 0 || !self.crc_pass
    }
}

/// Indices of the `t` least reliable decisions from an initial pass,
/// ordered by ascending |LLR| with ties broken toward the smaller index.
pub fn least_reliable_decisions(code: &PolarCode, magnitudes: &[f64], t: usize) -> Vec<usize> {
    debug_assert_eq!(magnitudes.len(), code.info_set().len());
    let mut ranked: Vec<(f64, usize)> = magnitudes
        .iter()
        .zip(code.info_set())
        .map(|(&m, &idx)| (m, idx))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked.truncate(t);
    ranked.into_iter().map(|(_, idx)| idx).collect()
}

/// SC flip decoding with at most `max_trials` re-decodes.
///
/// With `max_trials` = 0 this is plain SC decoding. The candidate list is
/// built once from the initial pass and never re-ranked.
pub fn sc_flip_decode(
    decoder: &mut ScDecoder,
    crc: &CrcSpec,
    frame: &LlrFrame,
    max_trials: u32,
) -> Result<FlipResult> {
    let initial = decoder.decode(frame, None)?;
    let mut total_activations = initial.node_activations;
    if check_crc(&initial.u_hat, decoder.code(), crc)? {
        return Ok(FlipResult {
            u_hat: initial.u_hat,
            crc_pass: true,
            attempts_used: 0,
            flip_candidates: Vec::new(),
            total_activations,
            crc_checks: 1,
        });
    }
    if max_trials == 0 {
        return Ok(FlipResult {
            u_hat: initial.u_hat,
            crc_pass: false,
            attempts_used: 0,
            flip_candidates: Vec::new(),
            total_activations,
            crc_checks: 1,
        });
    }

    let candidates = least_reliable_decisions(
        decoder.code(),
        &initial.decision_magnitudes,
        max_trials as usize,
    );
    let mut crc_checks = 1u32;
    let mut attempts_used = 0u32;
    let mut last = initial;
    for &index in &candidates {
        let attempt = decoder.decode(frame, Some(index))?;
        attempts_used += 1;
        total_activations += attempt.node_activations;
        let pass = check_crc(&attempt.u_hat, decoder.code(), crc)?;
        crc_checks += 1;
        last = attempt;
        if pass {
            return Ok(FlipResult {
                u_hat: last.u_hat,
                crc_pass: true,
                attempts_used,
                flip_candidates: candidates,
                total_activations,
                crc_checks,
            });
        }
    }
    Ok(FlipResult {
        u_hat: last.u_hat,
        crc_pass: false,
        attempts_used,
        flip_candidates: candidates,
        total_activations,
        crc_checks,
    })
}

/// Result of an oracle-assisted decode that corrects every error.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Always equals the transmitted u.
    pub u_hat: BitBlock,
    /// Decisions the oracle had to correct, i.e. errors caused by the
    /// channel rather than by propagation.
    pub channel_error_count: u32,
    /// 1-based index of the first corrected decision, if any.
    pub first_error_index: Option<usize>,
    pub node_activations: u64,
}

struct CorrectAll<'a> {
    truth: &'a BitBlock,
    corrections: u32,
    first_error: Option<usize>,
}

impl DecisionPolicy for CorrectAll<'_> {
    #[inline]
    fn decide(&mut self, index: usize, _llr: f64, hard: u8) -> u8 {
        let truth = self.truth.get(index);
        if hard != truth {
            self.corrections += 1;
            self.first_error.get_or_insert(index + 1);
        }
        truth
    }
}

struct CorrectFirst<'a> {
    truth: &'a BitBlock,
    intervened: bool,
}

impl DecisionPolicy for CorrectFirst<'_> {
    #[inline]
    fn decide(&mut self, index: usize, _llr: f64, hard: u8) -> u8 {
        if !self.intervened && hard != self.truth.get(index) {
            self.intervened = true;
            return self.truth.get(index);
        }
        hard
    }
}

/// Runs SC while an oracle corrects every erroneous decision before it can
/// propagate, counting the corrections.
pub fn oracle_count_decode(
    decoder: &mut ScDecoder,
    frame: &LlrFrame,
    true_u: &BitBlock,
) -> Result<OracleResult> {
    if true_u.len() != decoder.code().block_len() {
        return Err(Error::BlockLength {
            expected: decoder.code().block_len(),
            got: true_u.len(),
        });
    }
    let mut policy = CorrectAll {
        truth: true_u,
        corrections: 0,
        first_error: None,
    };
    let outcome = decoder.decode_with(frame, &mut policy)?;
    assert_eq!(
        outcome.u_hat, *true_u,
        "oracle-corrected decode must reproduce the transmitted u"
    );
    Ok(OracleResult {
        u_hat: outcome.u_hat,
        channel_error_count: policy.corrections,
        first_error_index: policy.first_error,
        node_activations: outcome.node_activations,
    })
}

/// Runs SC with a single oracle intervention at the first erroneous
/// decision; everything after follows the ordinary decision rule.
pub fn oracle_single_flip_decode(
    decoder: &mut ScDecoder,
    frame: &LlrFrame,
    true_u: &BitBlock,
) -> Result<DecodeOutcome> {
    if true_u.len() != decoder.code().block_len() {
        return Err(Error::BlockLength {
            expected: decoder.code().block_len(),
            got: true_u.len(),
        });
    }
    let mut policy = CorrectFirst {
        truth: true_u,
        intervened: false,
    };
    decoder.decode_with(frame, &mut policy)
}
