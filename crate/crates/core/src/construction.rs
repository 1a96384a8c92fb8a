//! Polar code construction.
//!
//! Channel reliabilities are tracked with Bhattacharyya-style scores that
//! evolve under the erasure-channel recursion `Z⁻ = 2Z − Z²`, `Z⁺ = Z²`.
//! Lower scores mean more reliable synthetic channels. The k best channels
//! carry payload bits; when an r-bit CRC is attached, the r best channels
//! among the remainder are promoted into the non-frozen set as well.
//!
//! Channel indices are 1-based throughout the public API, matching the
//! conventional numbering of synthetic channels u_1..u_N.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel parameter the score recursion starts from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Design {
    /// Erasure channel with the given erasure probability.
    Erasure { epsilon: f64 },
    /// AWGN design point; the initial score is exp(−rate · 10^(ebn0_db/10)).
    DesignSnr { ebn0_db: f64, rate: f64 },
}

impl Design {
    fn initial_score(&self) -> Result<f64> {
        match *self {
            Design::Erasure { epsilon } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(Error::ErasureProbability(epsilon));
                }
                Ok(epsilon)
            }
            Design::DesignSnr { ebn0_db, rate } => {
                if !ebn0_db.is_finite() {
                    return Err(Error::DesignSnr(ebn0_db));
                }
                if !(rate > 0.0 && rate < 1.0) {
                    return Err(Error::Rate(rate));
                }
                Ok((-rate * 10f64.powf(ebn0_db / 10.0)).exp())
            }
        }
    }
}

/// Per-channel reliability scores for a block of N = 2^n channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityProfile {
    block_exponent: u32,
    z_values: Vec<f64>,
    design: Design,
}

impl ReliabilityProfile {
    /// Wraps externally supplied scores, validating length and range.
    pub fn from_scores(block_exponent: u32, z_values: Vec<f64>, design: Design) -> Result<Self> {
        if block_exponent < 1 {
            return Err(Error::BlockExponent(block_exponent));
        }
        let expected = 1usize << block_exponent;
        if z_values.len() != expected {
            return Err(Error::ProfileLength {
                expected,
                got: z_values.len(),
            });
        }
        if let Some((index, &value)) = z_values
            .iter()
            .enumerate()
            .find(|(_, &z)| !(0.0..=1.0).contains(&z))
        {
            return Err(Error::ProfileScore { index, value });
        }
        Ok(Self {
            block_exponent,
            z_values,
            design,
        })
    }

    pub fn block_exponent(&self) -> u32 {
        self.block_exponent
    }

    pub fn block_len(&self) -> usize {
        1 << self.block_exponent
    }

    pub fn z_values(&self) -> &[f64] {
        &self.z_values
    }

    pub fn design(&self) -> Design {
        self.design
    }
}

/// Evolves the initial score through n polarization steps.
///
/// Each step maps a parent score to an adjacent (worse, better) pair, so
/// the output is ordered by synthetic channel index.
pub fn build_reliability(block_exponent: u32, design: Design) -> Result<ReliabilityProfile> {
    if block_exponent < 1 {
        return Err(Error::BlockExponent(block_exponent));
    }
    let z0 = design.initial_score()?;
    let mut z = vec![z0];
    for _ in 0..block_exponent {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &v in &z {
            next.push(2.0 * v - v * v);
            next.push(v * v);
        }
        z = next;
    }
    ReliabilityProfile::from_scores(block_exponent, z, design)
}

/// A constructed polar code: index sets, CRC budget and frozen values.
///
/// `info_set` holds the k + r non-frozen channel indices in ascending
/// order; `base_info_set` records which k of them were selected for the
/// payload before the CRC extension. All indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarCode {
    #[serde(rename = "n")]
    block_exponent: u32,
    #[serde(rename = "k")]
    payload_bits: usize,
    #[serde(rename = "r")]
    crc_bits: usize,
    base_info_set: Vec<usize>,
    info_set: Vec<usize>,
    frozen_set: Vec<usize>,
    #[serde(skip_serializing_if = "frozen_all_zero")]
    frozen_values: Vec<u8>,
    #[serde(rename = "design_param", skip_serializing_if = "Option::is_none")]
    design: Option<Design>,
    #[serde(skip)]
    info_mask: Vec<bool>,
    #[serde(skip)]
    frozen_dense: Vec<u8>,
}

fn frozen_all_zero(values: &[u8]) -> bool {
    values.iter().all(|&b| b == 0)
}

impl PolarCode {
    fn build(
        block_exponent: u32,
        payload_bits: usize,
        crc_bits: usize,
        base_info_set: Vec<usize>,
        info_set: Vec<usize>,
        frozen_values: Vec<u8>,
        design: Option<Design>,
    ) -> Result<Self> {
        let n = 1usize << block_exponent;
        if payload_bits + crc_bits >= n {
            return Err(Error::RateTooHigh {
                kr: payload_bits + crc_bits,
                n,
            });
        }
        if info_set.len() != payload_bits + crc_bits {
            return Err(Error::IndexSet(format!(
                "info set has {} indices, expected k + r = {}",
                info_set.len(),
                payload_bits + crc_bits
            )));
        }
        let mut info_mask = vec![false; n];
        for &idx in &info_set {
            if idx < 1 || idx > n {
                return Err(Error::IndexSet(format!("index {idx} outside 1..={n}")));
            }
            if info_mask[idx - 1] {
                return Err(Error::IndexSet(format!("duplicate index {idx}")));
            }
            info_mask[idx - 1] = true;
        }
        for &idx in &base_info_set {
            if idx < 1 || idx > n || !info_mask[idx - 1] {
                return Err(Error::IndexSet(format!(
                    "payload index {idx} is not part of the info set"
                )));
            }
        }
        let frozen_set: Vec<usize> = (1..=n).filter(|&i| !info_mask[i - 1]).collect();
        if frozen_values.len() != frozen_set.len() {
            return Err(Error::IndexSet(format!(
                "{} frozen values for {} frozen channels",
                frozen_values.len(),
                frozen_set.len()
            )));
        }
        if let Some(&bad) = frozen_values.iter().find(|&&b| b > 1) {
            return Err(Error::BitValue(bad));
        }
        let mut frozen_dense = vec![0u8; n];
        for (&idx, &value) in frozen_set.iter().zip(&frozen_values) {
            frozen_dense[idx - 1] = value;
        }
        let mut info_set = info_set;
        info_set.sort_unstable();
        let mut base_info_set = base_info_set;
        base_info_set.sort_unstable();
        Ok(Self {
            block_exponent,
            payload_bits,
            crc_bits,
            base_info_set,
            info_set,
            frozen_set,
            frozen_values,
            design,
            info_mask,
            frozen_dense,
        })
    }

    /// Assembles a code from an explicit non-frozen index set (1-based).
    ///
    /// The first `payload_bits` indices in ascending order are treated as
    /// payload positions for bookkeeping; frozen values default to zero.
    pub fn with_info_set(
        block_exponent: u32,
        info_set: Vec<usize>,
        payload_bits: usize,
        crc_bits: usize,
    ) -> Result<Self> {
        let n = 1usize << block_exponent;
        let mut sorted = info_set;
        sorted.sort_unstable();
        let base: Vec<usize> = sorted.iter().copied().take(payload_bits).collect();
        let frozen_count = n - sorted.len();
        Self::build(
            block_exponent,
            payload_bits,
            crc_bits,
            base,
            sorted,
            vec![0; frozen_count],
            None,
        )
    }

    /// Replaces the frozen values (aligned with `frozen_set` order).
    pub fn with_frozen_values(mut self, values: Vec<u8>) -> Result<Self> {
        if values.len() != self.frozen_set.len() {
            return Err(Error::IndexSet(format!(
                "{} frozen values for {} frozen channels",
                values.len(),
                self.frozen_set.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&b| b > 1) {
            return Err(Error::BitValue(bad));
        }
        for (&idx, &value) in self.frozen_set.iter().zip(&values) {
            self.frozen_dense[idx - 1] = value;
        }
        self.frozen_values = values;
        Ok(self)
    }

    pub fn block_exponent(&self) -> u32 {
        self.block_exponent
    }

    pub fn block_len(&self) -> usize {
        1 << self.block_exponent
    }

    /// Payload bits per frame (k).
    pub fn payload_bits(&self) -> usize {
        self.payload_bits
    }

    /// CRC bits per frame (r).
    pub fn crc_bits(&self) -> usize {
        self.crc_bits
    }

    /// Non-frozen channel count, k + r.
    pub fn info_bits(&self) -> usize {
        self.payload_bits + self.crc_bits
    }

    /// Transmitted rate (k + r) / N.
    pub fn rate(&self) -> f64 {
        self.info_bits() as f64 / self.block_len() as f64
    }

    /// Effective information rate k / N.
    pub fn payload_rate(&self) -> f64 {
        self.payload_bits as f64 / self.block_len() as f64
    }

    pub fn base_info_set(&self) -> &[usize] {
        &self.base_info_set
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen_set
    }

    pub fn frozen_values(&self) -> &[u8] {
        &self.frozen_values
    }

    pub fn design(&self) -> Option<Design> {
        self.design
    }

    /// Whether 0-based position `index` carries a non-frozen bit.
    pub fn is_info(&self, index: usize) -> bool {
        self.info_mask[index]
    }

    /// Frozen value at 0-based position `index` (zero for info positions).
    pub fn frozen_value(&self, index: usize) -> u8 {
        self.frozen_dense[index]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CodeFile = serde_json::from_str(text)?;
        raw.into_code()
    }
}

// Deserialization goes through a raw mirror so the derived masks are
// rebuilt and the invariants are re-checked on load.
#[derive(Deserialize)]
struct CodeFile {
    n: u32,
    k: usize,
    r: usize,
    #[serde(default)]
    base_info_set: Vec<usize>,
    info_set: Vec<usize>,
    #[serde(default)]
    frozen_set: Vec<usize>,
    #[serde(default)]
    frozen_values: Vec<u8>,
    design_param: Option<Design>,
}

impl CodeFile {
    fn into_code(self) -> Result<PolarCode> {
        let n = 1usize << self.n;
        let frozen_values = if self.frozen_values.is_empty() {
            vec![0; n - self.info_set.len()]
        } else {
            self.frozen_values
        };
        let base = if self.base_info_set.is_empty() {
            let mut sorted = self.info_set.clone();
            sorted.sort_unstable();
            sorted.into_iter().take(self.k).collect()
        } else {
            self.base_info_set
        };
        let code = PolarCode::build(
            self.n,
            self.k,
            self.r,
            base,
            self.info_set,
            frozen_values,
            self.design_param,
        )?;
        if !self.frozen_set.is_empty() && code.frozen_set != self.frozen_set {
            return Err(Error::IndexSet(
                "stored frozen set is not the complement of the info set".into(),
            ));
        }
        Ok(code)
    }
}

impl<'de> Deserialize<'de> for PolarCode {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = CodeFile::deserialize(deserializer)?;
        raw.into_code().map_err(serde::de::Error::custom)
    }
}

/// Selects the non-frozen sets from a reliability profile.
///
/// The payload set takes the k lowest scores; the CRC extension takes the
/// r lowest scores among the remaining channels. Ties prefer the larger
/// index, which polarization makes the better channel.
pub fn select_sets(profile: &ReliabilityProfile, k: usize, r: usize) -> Result<PolarCode> {
    let n = profile.block_len();
    if k == 0 {
        return Err(Error::IndexSet(
            "payload bit count k must be positive".into(),
        ));
    }
    if k + r >= n {
        return Err(Error::RateTooHigh { kr: k + r, n });
    }
    let z = profile.z_values();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a].total_cmp(&z[b]).then(b.cmp(&a)));

    let mut base: Vec<usize> = order[..k].iter().map(|&i| i + 1).collect();
    let mut info: Vec<usize> = order[..k + r].iter().map(|&i| i + 1).collect();
    base.sort_unstable();
    info.sort_unstable();

    PolarCode::build(
        profile.block_exponent(),
        k,
        r,
        base,
        info,
        vec![0; n - (k + r)],
        Some(profile.design()),
    )
}
