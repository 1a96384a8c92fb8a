//! Monte Carlo experiment harness.
//!
//! A plan fixes one code, a decoder set, an Eb/N0 grid and a stop rule.
//! Every selected decoder selects the same per-frame noise realization, so
//! decoders can be compared frame by frame (matched noise). Frames within
//! a point run in parallel; every per-frame quantity is derived from a
//! ChaCha stream keyed by (seed, Eb/N0, frame index) and all accumulators
//! are commutative integer sums, so reports do not depend on the worker
//! count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::bits::BitBlock;
use crate::channel::{transmit_rng, ChannelSpec};
use crate::codec::{assemble_u, check_crc, polar_transform};
use crate::construction::{build_reliability, select_sets, Design, PolarCode};
use crate::crc::CrcSpec;
use crate::error::{Error, Result};
use crate::flip::{oracle_count_decode, oracle_single_flip_decode, sc_flip_decode};
use crate::sc::{LlrFrame, ScDecoder};

/// Largest exactly-binned error count in oracle histograms; larger counts
/// land in the overflow bin.
pub const HISTOGRAM_MAX_ERRORS: u32 = 50;

const FRAME_BATCH: u64 = 2048;

/// Decoder selection for an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecoderKind {
    /// Plain successive cancellation.
    Sc,
    /// CRC-aided SC flip with the given trial budget.
    ScFlip { max_trials: u32 },
    /// Oracle that corrects and counts every erroneous decision.
    OracleCount,
    /// Oracle that corrects only the first erroneous decision.
    OracleSingleFlip,
}

impl DecoderKind {
    pub fn label(&self) -> String {
        match self {
            DecoderKind::Sc => "sc".into(),
            DecoderKind::ScFlip { max_trials } => format!("sc_flip_t{max_trials}"),
            DecoderKind::OracleCount => "oracle_count".into(),
            DecoderKind::OracleSingleFlip => "oracle_single_flip".into(),
        }
    }

    /// Rank in the frame-level success hierarchy: a correct frame for a
    /// weaker decoder implies a correct frame for every stronger one.
    /// `OracleCount` is excluded (its output is always correct).
    fn strength(&self) -> Option<u64> {
        match self {
            DecoderKind::Sc => Some(0),
            DecoderKind::ScFlip { max_trials } => Some(1 + u64::from(*max_trials)),
            DecoderKind::OracleSingleFlip => Some(u64::MAX),
            DecoderKind::OracleCount => None,
        }
    }
}

/// Which rate enters the Eb/N0-to-noise conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateConvention {
    /// Energy per payload bit, rate k/N. CRC-bearing and plain codes of
    /// the same k then share a fair Eb/N0 axis.
    #[default]
    Payload,
    /// Energy per transmitted info bit, rate (k + r)/N.
    Extended,
}

/// Full description of a Monte Carlo experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub block_exponent: u32,
    pub payload_bits: usize,
    pub crc_bits: usize,
    pub design: Design,
    pub crc: CrcSpec,
    pub decoders: Vec<DecoderKind>,
    pub ebn0_grid: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default)]
    pub rate_convention: RateConvention,
}

impl ExperimentPlan {
    /// A plan with conventional defaults: AWGN design point at 2.0 dB, the
    /// default CRC for the requested width, plain SC, 100 frame errors or
    /// 10^7 frames per point.
    pub fn new(block_exponent: u32, payload_bits: usize, crc_bits: usize) -> Result<Self> {
        let n = 1u64 << block_exponent;
        Ok(Self {
            block_exponent,
            payload_bits,
            crc_bits,
            design: Design::DesignSnr {
                ebn0_db: 2.0,
                rate: payload_bits as f64 / n as f64,
            },
            crc: CrcSpec::default_for_width(crc_bits)?,
            decoders: vec![DecoderKind::Sc],
            ebn0_grid: vec![2.0],
            min_frame_errors: 100,
            max_frames: 10_000_000,
            base_seed: 0,
            noiseless: false,
            rate_convention: RateConvention::Payload,
        })
    }

    pub fn effective_rate(&self) -> f64 {
        let n = self.block_len() as f64;
        match self.rate_convention {
            RateConvention::Payload => self.payload_bits as f64 / n,
            RateConvention::Extended => (self.payload_bits + self.crc_bits) as f64 / n,
        }
    }

    pub fn block_len(&self) -> usize {
        1 << self.block_exponent
    }

    pub fn validate(&self) -> Result<()> {
        if self.payload_bits == 0 {
            return Err(Error::Plan("payload_bits must be positive".into()));
        }
        if self.payload_bits + self.crc_bits >= self.block_len() {
            return Err(Error::Plan("k + r must be smaller than N".into()));
        }
        if self.crc.width() != self.crc_bits {
            return Err(Error::CrcMismatch {
                crc: self.crc.width(),
                r: self.crc_bits,
            });
        }
        if self.decoders.is_empty() {
            return Err(Error::Plan("no decoders selected".into()));
        }
        if self.ebn0_grid.is_empty() {
            return Err(Error::Plan("empty Eb/N0 grid".into()));
        }
        if self.ebn0_grid.iter().any(|e| !e.is_finite()) {
            return Err(Error::Plan("non-finite Eb/N0 point".into()));
        }
        if self.min_frame_errors == 0 {
            return Err(Error::Plan("min_frame_errors must be at least 1".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Plan("max_frames must be at least 1".into()));
        }
        Ok(())
    }

    /// Builds the code this plan simulates.
    pub fn build_code(&self) -> Result<PolarCode> {
        let profile = build_reliability(self.block_exponent, self.design)?;
        select_sets(&profile, self.payload_bits, self.crc_bits)
    }
}

/// One histogram bin: frames whose oracle correction count equals `errors`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub errors: u32,
    pub count: u64,
    pub relative_frequency: f64,
}

/// Distribution of channel-caused error counts, conditioned on at least
/// one error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorHistogram {
    pub error_frames: u64,
    pub bins: Vec<HistogramBin>,
    pub overflow_count: u64,
    pub overflow_frequency: f64,
}

impl ErrorHistogram {
    /// Relative frequency of a given error count (0 when unobserved).
    pub fn frequency(&self, errors: u32) -> f64 {
        self.bins
            .iter()
            .find(|b| b.errors == errors)
            .map_or(0.0, |b| b.relative_frequency)
    }

    /// The error count with the highest relative frequency.
    pub fn mode(&self) -> Option<u32> {
        self.bins
            .iter()
            .max_by(|a, b| a.count.cmp(&b.count))
            .map(|b| b.errors)
    }
}

/// Per-decoder statistics at one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecoderReport {
    pub decoder: String,
    pub frames: u64,
    /// û ≠ u frames; for `oracle_count`, frames with at least one
    /// corrected decision.
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub undetected_crc_errors: u64,
    pub initial_crc_failures: u64,
    pub fer: f64,
    pub ber: f64,
    /// 95% confidence half-width on `fer` (normal approximation).
    pub fer_ci95: f64,
    pub mean_attempts: f64,
    pub mean_activations: f64,
    /// mean_activations / (N·log2 N).
    pub normalized_complexity: f64,
    pub mean_crc_checks: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub histogram: Option<ErrorHistogram>,
}

/// Statistics for one Eb/N0 grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointReport {
    pub ebn0_db: f64,
    pub noise_variance: f64,
    pub frames: u64,
    /// Whether the stop rule reached `min_frame_errors` for every decoder
    /// before `max_frames` ran out.
    pub reached_min_errors: bool,
    /// Frames violating the decoder success hierarchy (expected 0).
    pub dominance_violations: u64,
    pub decoders: Vec<DecoderReport>,
}

impl PointReport {
    pub fn decoder(&self, label: &str) -> Option<&DecoderReport> {
        self.decoders.iter().find(|d| d.decoder == label)
    }
}

/// Code parameters echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSummary {
    pub block_exponent: u32,
    pub block_len: usize,
    pub payload_bits: usize,
    pub crc_bits: usize,
    pub rate: f64,
    pub payload_rate: f64,
    pub design: Option<Design>,
}

impl CodeSummary {
    pub fn of(code: &PolarCode) -> Self {
        Self {
            block_exponent: code.block_exponent(),
            block_len: code.block_len(),
            payload_bits: code.payload_bits(),
            crc_bits: code.crc_bits(),
            rate: code.rate(),
            payload_rate: code.payload_rate(),
            design: code.design(),
        }
    }
}

/// Aggregated results for a whole sweep; self-describing via the embedded
/// plan and code summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub code: CodeSummary,
    pub points: Vec<PointReport>,
}

impl ExperimentReport {
    pub fn point(&self, ebn0_db: f64) -> Option<&PointReport> {
        self.points.iter().find(|p| p.ebn0_db == ebn0_db)
    }
}

#[derive(Clone)]
struct DecoderAccum {
    frame_errors: u64,
    bit_errors: u64,
    undetected: u64,
    initial_crc_failures: u64,
    attempts_sum: u64,
    activations_sum: u64,
    crc_checks_sum: u64,
    hist: Vec<u64>, // index 1..=HISTOGRAM_MAX_ERRORS exact, last slot overflow
}

impl DecoderAccum {
    fn zero() -> Self {
        Self {
            frame_errors: 0,
            bit_errors: 0,
            undetected: 0,
            initial_crc_failures: 0,
            attempts_sum: 0,
            activations_sum: 0,
            crc_checks_sum: 0,
            hist: vec![0; HISTOGRAM_MAX_ERRORS as usize + 2],
        }
    }

    fn merge(&mut self, other: &Self) {
        self.frame_errors += other.frame_errors;
        self.bit_errors += other.bit_errors;
        self.undetected += other.undetected;
        self.initial_crc_failures += other.initial_crc_failures;
        self.attempts_sum += other.attempts_sum;
        self.activations_sum += other.activations_sum;
        self.crc_checks_sum += other.crc_checks_sum;
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
    }
}

#[derive(Clone)]
struct PointAccum {
    frames: u64,
    dominance_violations: u64,
    decoders: Vec<DecoderAccum>,
}

impl PointAccum {
    fn zero(n_decoders: usize) -> Self {
        Self {
            frames: 0,
            dominance_violations: 0,
            decoders: vec![DecoderAccum::zero(); n_decoders],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.frames += other.frames;
        self.dominance_violations += other.dominance_violations;
        for (a, b) in self.decoders.iter_mut().zip(&other.decoders) {
            a.merge(b);
        }
        self
    }
}

struct PointContext<'a> {
    plan: &'a ExperimentPlan,
    code: &'a PolarCode,
    spec: ChannelSpec,
    point_seed: u64,
    /// 0-based payload positions (first k info indices).
    payload_positions: Vec<usize>,
}

struct Worker<'a> {
    ctx: &'a PointContext<'a>,
    sc: ScDecoder,
    acc: PointAccum,
    correct: Vec<Option<bool>>,
}

impl<'a> Worker<'a> {
    fn new(ctx: &'a PointContext<'a>) -> Self {
        Self {
            ctx,
            sc: ScDecoder::new(ctx.code),
            acc: PointAccum::zero(ctx.plan.decoders.len()),
            correct: vec![None; ctx.plan.decoders.len()],
        }
    }

    fn run_frame(&mut self, frame_index: u64) {
        let ctx = self.ctx;
        let code = ctx.code;
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.point_seed);
        rng.set_stream(frame_index);

        let payload = BitBlock::from_bits(
            (0..code.payload_bits())
                .map(|_| rng.random_range(0..2u8))
                .collect(),
        )
        .expect("payload bits");
        let u = assemble_u(&payload, code, &ctx.plan.crc).expect("assemble");
        let mut x = u.clone();
        polar_transform(&mut x).expect("transform");
        let frame = if ctx.plan.noiseless {
            crate::channel::transmit_noiseless(&x)
        } else {
            transmit_rng(&x, &ctx.spec, &mut rng).expect("transmit")
        };

        for (slot, kind) in ctx.plan.decoders.iter().enumerate() {
            self.correct[slot] = self.run_decoder(slot, *kind, &u, &frame);
        }

        // frame-level success hierarchy on matched noise
        let decoders = &ctx.plan.decoders;
        for i in 0..decoders.len() {
            for j in 0..decoders.len() {
                let (Some(si), Some(sj)) = (decoders[i].strength(), decoders[j].strength()) else {
                    continue;
                };
                if si < sj {
                    if let (Some(true), Some(false)) = (self.correct[i], self.correct[j]) {
                        self.acc.dominance_violations += 1;
                    }
                }
            }
        }
        self.acc.frames += 1;
    }

    fn run_decoder(
        &mut self,
        slot: usize,
        kind: DecoderKind,
        u: &BitBlock,
        frame: &LlrFrame,
    ) -> Option<bool> {
        let ctx = self.ctx;
        let code = ctx.code;
        let crc = &ctx.plan.crc;
        let acc = &mut self.acc.decoders[slot];
        match kind {
            DecoderKind::Sc => {
                let out = self.sc.decode(frame, None).expect("sc decode");
                let correct = out.u_hat == *u;
                acc.activations_sum += out.node_activations;
                if !correct {
                    acc.frame_errors += 1;
                    acc.bit_errors += payload_bit_errors(&out.u_hat, u, &ctx.payload_positions);
                    if code.crc_bits() > 0 && check_crc(&out.u_hat, code, crc).expect("crc check") {
                        acc.undetected += 1;
                    }
                }
                Some(correct)
            }
            DecoderKind::ScFlip { max_trials } => {
                let res = sc_flip_decode(&mut self.sc, crc, frame, max_trials).expect("sc flip");
                let correct = res.u_hat == *u;
                acc.activations_sum += res.total_activations;
                acc.attempts_sum += u64::from(res.attempts_used);
                acc.crc_checks_sum += u64::from(res.crc_checks);
                if res.initial_crc_failed() {
                    acc.initial_crc_failures += 1;
                }
                if !correct {
                    acc.frame_errors += 1;
                    acc.bit_errors += payload_bit_errors(&res.u_hat, u, &ctx.payload_positions);
                    if res.crc_pass {
                        acc.undetected += 1;
                    }
                }
                Some(correct)
            }
            DecoderKind::OracleCount => {
                let res = oracle_count_decode(&mut self.sc, frame, u).expect("oracle count");
                acc.activations_sum += res.node_activations;
                if res.channel_error_count > 0 {
                    acc.frame_errors += 1;
                    let bin = res.channel_error_count.min(HISTOGRAM_MAX_ERRORS + 1) as usize;
                    acc.hist[bin] += 1;
                }
                None
            }
            DecoderKind::OracleSingleFlip => {
                let out = oracle_single_flip_decode(&mut self.sc, frame, u).expect("oracle single");
                let correct = out.u_hat == *u;
                acc.activations_sum += out.node_activations;
                if !correct {
                    acc.frame_errors += 1;
                    acc.bit_errors += payload_bit_errors(&out.u_hat, u, &ctx.payload_positions);
                }
                Some(correct)
            }
        }
    }
}

fn payload_bit_errors(u_hat: &BitBlock, u: &BitBlock, positions: &[usize]) -> u64 {
    positions
        .iter()
        .filter(|&&p| u_hat.get(p) != u.get(p))
        .count() as u64
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Runs the plan at a single Eb/N0 point.
///
/// Frames are processed in fixed-size batches; the stop rule is evaluated
/// at batch boundaries, so the frame count is a pure function of the plan.
pub fn run_point(plan: &ExperimentPlan, ebn0_db: f64) -> Result<PointReport> {
    plan.validate()?;
    let code = plan.build_code()?;
    run_point_with_code(plan, &code, ebn0_db)
}

fn run_point_with_code(
    plan: &ExperimentPlan,
    code: &PolarCode,
    ebn0_db: f64,
) -> Result<PointReport> {
    let point_seed = splitmix64(plan.base_seed ^ splitmix64(ebn0_db.to_bits()));
    let spec = ChannelSpec::new(ebn0_db, plan.effective_rate(), point_seed)?;
    let ctx = PointContext {
        plan,
        code,
        spec,
        point_seed,
        payload_positions: code.info_set()[..code.payload_bits()]
            .iter()
            .map(|&i| i - 1)
            .collect(),
    };

    let mut total = PointAccum::zero(plan.decoders.len());
    let mut frames_done = 0u64;
    while frames_done < plan.max_frames {
        let batch = FRAME_BATCH.min(plan.max_frames - frames_done);
        let batch_acc = (frames_done..frames_done + batch)
            .into_par_iter()
            .fold(
                || Worker::new(&ctx),
                |mut worker, frame_index| {
                    worker.run_frame(frame_index);
                    worker
                },
            )
            .map(|worker| worker.acc)
            .reduce(|| PointAccum::zero(plan.decoders.len()), PointAccum::merge);
        total = total.merge(batch_acc);
        frames_done += batch;
        let slowest = total
            .decoders
            .iter()
            .map(|d| d.frame_errors)
            .min()
            .unwrap_or(0);
        if slowest >= plan.min_frame_errors {
            break;
        }
    }

    Ok(finalize_point(
        plan,
        code,
        ebn0_db,
        ctx.spec.noise_variance(),
        total,
    ))
}

fn finalize_point(
    plan: &ExperimentPlan,
    code: &PolarCode,
    ebn0_db: f64,
    noise_variance: f64,
    acc: PointAccum,
) -> PointReport {
    let frames = acc.frames;
    let nlogn = (code.block_len() as u64) * u64::from(code.block_exponent());
    let decoders = plan
        .decoders
        .iter()
        .zip(&acc.decoders)
        .map(|(kind, d)| {
            let fer = d.frame_errors as f64 / frames as f64;
            let ber = d.bit_errors as f64 / (frames as f64 * code.payload_bits() as f64);
            let mean_activations = d.activations_sum as f64 / frames as f64;
            let histogram = match kind {
                DecoderKind::OracleCount => Some(build_histogram(d)),
                _ => None,
            };
            DecoderReport {
                decoder: kind.label(),
                frames,
                frame_errors: d.frame_errors,
                bit_errors: d.bit_errors,
                undetected_crc_errors: d.undetected,
                initial_crc_failures: d.initial_crc_failures,
                fer,
                ber,
                fer_ci95: 1.96 * (fer * (1.0 - fer) / frames as f64).sqrt(),
                mean_attempts: d.attempts_sum as f64 / frames as f64,
                mean_activations,
                normalized_complexity: mean_activations / nlogn as f64,
                mean_crc_checks: d.crc_checks_sum as f64 / frames as f64,
                histogram,
            }
        })
        .collect::<Vec<_>>();
    let reached = decoders
        .iter()
        .all(|d| d.frame_errors >= plan.min_frame_errors);
    PointReport {
        ebn0_db,
        noise_variance,
        frames,
        reached_min_errors: reached,
        dominance_violations: acc.dominance_violations,
        decoders,
    }
}

fn build_histogram(acc: &DecoderAccum) -> ErrorHistogram {
    let error_frames = acc.frame_errors;
    let denom = if error_frames == 0 {
        1.0
    } else {
        error_frames as f64
    };
    let bins = (1..=HISTOGRAM_MAX_ERRORS)
        .filter_map(|errors| {
            let count = acc.hist[errors as usize];
            (count > 0).then_some(HistogramBin {
                errors,
                count,
                relative_frequency: count as f64 / denom,
            })
        })
        .collect();
    let overflow_count = acc.hist[HISTOGRAM_MAX_ERRORS as usize + 1];
    ErrorHistogram {
        error_frames,
        bins,
        overflow_count,
        overflow_frequency: overflow_count as f64 / denom,
    }
}

/// Runs the plan over its whole Eb/N0 grid.
///
/// Points that exhaust `max_frames` before collecting `min_frame_errors`
/// are kept and flagged via `reached_min_errors = false`.
pub fn run_sweep(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let code = plan.build_code()?;
    let mut points = Vec::with_capacity(plan.ebn0_grid.len());
    for &ebn0 in &plan.ebn0_grid {
        points.push(run_point_with_code(plan, &code, ebn0)?);
    }
    Ok(ExperimentReport {
        plan: plan.clone(),
        code: CodeSummary::of(&code),
        points,
    })
}

/// Normalized average complexity per grid point for one decoder label.
pub fn complexity_curve(report: &ExperimentReport, decoder: &str) -> Vec<(f64, f64)> {
    report
        .points
        .iter()
        .filter_map(|p| {
            p.decoder(decoder)
                .map(|d| (p.ebn0_db, d.normalized_complexity))
        })
        .collect()
}

/// Writes bytes via a temp file and rename so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".into(),
    });
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Serializes the report as pretty JSON.
pub fn report_json(report: &ExperimentReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn write_report_json(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut text = report_json(report)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Flat CSV: one row per point per decoder. Column order is fixed:
/// `ebn0_db,decoder,frames,frame_errors,fer,ber,mean_attempts,norm_complexity,ci_halfwidth`.
pub fn report_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "ebn0_db,decoder,frames,frame_errors,fer,ber,mean_attempts,norm_complexity,ci_halfwidth\n",
    );
    for point in &report.points {
        for dec in &point.decoders {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                point.ebn0_db,
                dec.decoder,
                dec.frames,
                dec.frame_errors,
                dec.fer,
                dec.ber,
                dec.mean_attempts,
                dec.normalized_complexity,
                dec.fer_ci95,
            ));
        }
    }
    out
}

pub fn write_report_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_atomic(path, report_csv(report).as_bytes())
}

fn plan_comment(report: &ExperimentReport) -> String {
    // keeps the data file self-describing; gnuplot skips # lines
    format!(
        "# plan {}\n",
        serde_json::to_string(&report.plan).unwrap_or_default()
    )
}

/// Whitespace-separated FER columns, gnuplot-ready: one row per Eb/N0
/// point, one column per decoder.
pub fn fer_dat(report: &ExperimentReport) -> String {
    let labels: Vec<String> = report.plan.decoders.iter().map(|d| d.label()).collect();
    let mut out = plan_comment(report);
    out.push_str(&format!("# ebn0_db {}\n", labels.join(" ")));
    for point in &report.points {
        out.push_str(&format!("{}", point.ebn0_db));
        for label in &labels {
            let fer = point.decoder(label).map_or(f64::NAN, |d| d.fer);
            out.push_str(&format!(" {fer}"));
        }
        out.push('\n');
    }
    out
}

/// Error-count histogram columns, one per Eb/N0 point, rows 1..=50 plus a
/// final overflow row labeled `>50`.
pub fn histogram_dat(report: &ExperimentReport) -> String {
    let mut out = plan_comment(report);
    out.push_str("# errors");
    for point in &report.points {
        out.push_str(&format!(" p_at_{}dB", point.ebn0_db));
    }
    out.push('\n');
    let columns: Vec<Option<&ErrorHistogram>> = report
        .points
        .iter()
        .map(|point| point.decoders.iter().find_map(|d| d.histogram.as_ref()))
        .collect();
    for errors in 1..=HISTOGRAM_MAX_ERRORS {
        out.push_str(&format!("{errors}"));
        for hist in &columns {
            let freq = hist.map_or(0.0, |h| h.frequency(errors));
            out.push_str(&format!(" {freq}"));
        }
        out.push('\n');
    }
    out.push_str(">50");
    for hist in &columns {
        let freq = hist.map_or(0.0, |h| h.overflow_frequency);
        out.push_str(&format!(" {freq}"));
    }
    out.push('\n');
    out
}

/// Normalized-complexity columns for every SC-flip decoder in the plan.
pub fn complexity_dat(report: &ExperimentReport) -> String {
    let labels: Vec<String> = report
        .plan
        .decoders
        .iter()
        .filter(|d| matches!(d, DecoderKind::ScFlip { .. }))
        .map(|d| d.label())
        .collect();
    let mut out = plan_comment(report);
    out.push_str(&format!("# ebn0_db {}\n", labels.join(" ")));
    for point in &report.points {
        out.push_str(&format!("{}", point.ebn0_db));
        for label in &labels {
            let value = point
                .decoder(label)
                .map_or(f64::NAN, |d| d.normalized_complexity);
            out.push_str(&format!(" {value}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan() -> ExperimentPlan {
        let mut plan = ExperimentPlan::new(6, 24, 8).unwrap();
        plan.decoders = vec![
            DecoderKind::Sc,
            DecoderKind::ScFlip { max_trials: 4 },
            DecoderKind::OracleCount,
            DecoderKind::OracleSingleFlip,
        ];
        plan.ebn0_grid = vec![2.0];
        plan.min_frame_errors = 30;
        plan.max_frames = 4000;
        plan.base_seed = 7;
        plan
    }

    #[test]
    fn noiseless_runs_are_error_free() {
        let mut plan = small_plan();
        plan.noiseless = true;
        plan.max_frames = 256;
        plan.min_frame_errors = 1;
        let report = run_sweep(&plan).unwrap();
        let point = &report.points[0];
        assert!(!point.reached_min_errors);
        for dec in &point.decoders {
            assert_eq!(dec.frame_errors, 0);
            assert_eq!(dec.fer, 0.0);
            if dec.decoder.starts_with("sc_flip") {
                assert_eq!(dec.normalized_complexity, 1.0);
                assert_eq!(dec.mean_attempts, 0.0);
            }
        }
    }

    #[test]
    fn flip_zero_trials_matches_plain_sc() {
        let mut plan = small_plan();
        plan.decoders = vec![DecoderKind::Sc, DecoderKind::ScFlip { max_trials: 0 }];
        plan.min_frame_errors = 50;
        plan.max_frames = 2000;
        let point = run_point(&plan, 2.0).unwrap();
        let sc = point.decoder("sc").unwrap();
        let flip = point.decoder("sc_flip_t0").unwrap();
        assert_eq!(sc.frame_errors, flip.frame_errors);
        assert_eq!(sc.bit_errors, flip.bit_errors);
        assert_eq!(sc.mean_activations, flip.mean_activations);
        // plain SC always performs exactly one pass per frame
        assert_eq!(sc.normalized_complexity, 1.0);
        assert_eq!(point.dominance_violations, 0);
    }

    #[test]
    fn histogram_frequencies_sum_to_one() {
        let mut plan = small_plan();
        plan.decoders = vec![DecoderKind::OracleCount];
        plan.min_frame_errors = 200;
        plan.max_frames = 20_000;
        let point = run_point(&plan, 1.5).unwrap();
        let hist = point.decoders[0].histogram.as_ref().unwrap();
        assert!(hist.error_frames >= 200);
        let total: f64 =
            hist.bins.iter().map(|b| b.relative_frequency).sum::<f64>() + hist.overflow_frequency;
        assert!((total - 1.0).abs() < 1e-9);
        let counted: u64 = hist.bins.iter().map(|b| b.count).sum::<u64>() + hist.overflow_count;
        assert_eq!(counted, hist.error_frames);
    }

    #[test]
    fn oracle_count_error_frames_match_sc_frame_errors() {
        // a frame has >= 1 channel error exactly when plain SC fails it
        let mut plan = small_plan();
        plan.decoders = vec![DecoderKind::Sc, DecoderKind::OracleCount];
        plan.min_frame_errors = 50;
        plan.max_frames = 4000;
        let point = run_point(&plan, 2.0).unwrap();
        assert_eq!(
            point.decoder("sc").unwrap().frame_errors,
            point.decoder("oracle_count").unwrap().frame_errors
        );
    }

    #[test]
    fn reports_are_worker_count_independent() {
        let mut plan = small_plan();
        plan.min_frame_errors = 20;
        plan.max_frames = 1500;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let quad = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = single.install(|| run_sweep(&plan)).unwrap();
        let b = quad.install(|| run_sweep(&plan)).unwrap();
        assert_eq!(report_json(&a).unwrap(), report_json(&b).unwrap());
        assert_eq!(report_csv(&a), report_csv(&b));
    }

    #[test]
    fn sweep_single_point_equals_run_point() {
        let plan = small_plan();
        let sweep = run_sweep(&plan).unwrap();
        let point = run_point(&plan, 2.0).unwrap();
        assert_eq!(
            serde_json::to_string(&sweep.points[0]).unwrap(),
            serde_json::to_string(&point).unwrap()
        );
    }

    #[test]
    fn dominance_holds_across_trial_budgets() {
        let mut plan = small_plan();
        plan.decoders = vec![
            DecoderKind::Sc,
            DecoderKind::ScFlip { max_trials: 1 },
            DecoderKind::ScFlip { max_trials: 8 },
            DecoderKind::OracleSingleFlip,
        ];
        plan.ebn0_grid = vec![1.0];
        plan.min_frame_errors = 50;
        plan.max_frames = 3000;
        let point = run_point(&plan, 1.0).unwrap();
        assert_eq!(point.dominance_violations, 0);
        let fer_of = |label: &str| point.decoder(label).unwrap().fer;
        assert!(fer_of("oracle_single_flip") <= fer_of("sc_flip_t8"));
        assert!(fer_of("sc_flip_t8") <= fer_of("sc_flip_t1"));
        assert!(fer_of("sc_flip_t1") <= fer_of("sc"));
    }

    #[test]
    fn plan_validation_rejects_nonsense() {
        let mut plan = small_plan();
        plan.ebn0_grid.clear();
        assert!(plan.validate().is_err());

        let mut plan = small_plan();
        plan.payload_bits = 0;
        assert!(plan.validate().is_err());

        let mut plan = small_plan();
        plan.crc = CrcSpec::none();
        assert!(plan.validate().is_err());

        let mut plan = small_plan();
        plan.min_frame_errors = 0;
        assert!(plan.validate().is_err());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let mut plan = small_plan();
        plan.noiseless = true;
        plan.max_frames = 64;
        plan.min_frame_errors = 1;
        let report = run_sweep(&plan).unwrap();
        let csv = report_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "ebn0_db,decoder,frames,frame_errors,fer,ber,mean_attempts,norm_complexity,ci_halfwidth"
        );
        assert_eq!(lines.count(), plan.decoders.len());
    }

    #[test]
    fn sweep_fer_decreases_with_snr() {
        let mut plan = ExperimentPlan::new(8, 128, 0).unwrap();
        plan.decoders = vec![DecoderKind::Sc];
        plan.ebn0_grid = vec![1.0, 2.0, 3.0];
        plan.min_frame_errors = 50;
        plan.max_frames = 30_000;
        plan.base_seed = 13;
        let report = run_sweep(&plan).unwrap();
        let fers: Vec<f64> = report.points.iter().map(|p| p.decoders[0].fer).collect();
        assert!(fers[0] > fers[1] && fers[1] > fers[2], "{fers:?}");
        assert!(report.points.iter().all(|p| p.reached_min_errors));
    }

    #[test]
    fn weak_crc_shows_undetected_errors() {
        // a 1-bit check misses roughly half of the wrong codewords
        let mut plan = ExperimentPlan::new(6, 24, 0).unwrap();
        plan.crc_bits = 1;
        plan.crc = CrcSpec::new(1, 0x1, 0x0, 0x0).unwrap();
        plan.decoders = vec![DecoderKind::ScFlip { max_trials: 2 }];
        plan.ebn0_grid = vec![1.0];
        plan.min_frame_errors = 200;
        plan.max_frames = 6000;
        plan.base_seed = 3;
        let point = run_point(&plan, 1.0).unwrap();
        let dec = &point.decoders[0];
        assert!(dec.undetected_crc_errors > 0);
        // undetected errors are still counted as frame errors
        assert!(dec.undetected_crc_errors <= dec.frame_errors);
    }

    #[test]
    fn complexity_curve_extracts_flip_column() {
        let mut plan = small_plan();
        plan.decoders = vec![DecoderKind::Sc, DecoderKind::ScFlip { max_trials: 8 }];
        plan.ebn0_grid = vec![1.5, 2.5];
        plan.min_frame_errors = 10;
        plan.max_frames = 2000;
        let report = run_sweep(&plan).unwrap();
        let curve = complexity_curve(&report, "sc_flip_t8");
        assert_eq!(curve.len(), 2);
        for ((ebn0, value), point) in curve.iter().zip(&report.points) {
            assert_eq!(*ebn0, point.ebn0_db);
            assert_eq!(
                *value,
                point.decoder("sc_flip_t8").unwrap().normalized_complexity
            );
            assert!(*value >= 1.0 && *value <= 9.0);
        }
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = small_plan();
        let text = serde_json::to_string(&plan).unwrap();
        let back: ExperimentPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
