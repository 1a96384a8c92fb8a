//! Command-line front end for the polar FEC toolkit.
//!
//! Subcommands: `construct` (frozen/info set selection), `decode-frame`
//! (single-frame debugging), and the experiment recipes `fer`,
//! `histogram` and `complexity`. Outputs are written atomically and are
//! byte-identical across runs with the same flags and seeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use polarflip::channel::{transmit, transmit_noiseless, ChannelSpec};
use polarflip::codec::{check_crc, encode, extract_payload};
use polarflip::construction::{build_reliability, select_sets, Design, PolarCode};
use polarflip::crc::CrcSpec;
use polarflip::flip::{oracle_count_decode, oracle_single_flip_decode, sc_flip_decode};
use polarflip::sc::ScDecoder;
use polarflip::sim::{
    complexity_dat, fer_dat, histogram_dat, run_sweep, write_atomic, write_report_csv,
    write_report_json, DecoderKind, ExperimentPlan, ExperimentReport, RateConvention,
};
use polarflip::{BitBlock, LlrFrame};

const OUTDIR_ENV: &str = "POLARFLIP_OUTDIR";

#[derive(Parser)]
#[command(
    name = "polarflip",
    version,
    about = "Polar code construction, SC / SC-flip decoding and Monte Carlo experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write it as JSON.
    Construct(ConstructCmd),
    /// Encode, transmit and decode a single frame.
    DecodeFrame(DecodeFrameCmd),
    /// Frame/bit error rate sweep over an Eb/N0 grid.
    Fer(ExperimentCmd),
    /// Channel-error-count histogram from the counting oracle decoder.
    Histogram(ExperimentCmd),
    /// Normalized average decoding complexity of SC flip.
    Complexity(ExperimentCmd),
}

/// Code parameters shared by every subcommand.
#[derive(Args, Debug, Default)]
struct CodeArgs {
    /// Block exponent n (N = 2^n). Default 10.
    #[arg(long)]
    n: Option<u32>,
    /// Payload bits per frame. Default 512.
    #[arg(long)]
    k: Option<usize>,
    /// CRC width r. Default 16.
    #[arg(long)]
    crc: Option<usize>,
    /// Construction design Eb/N0 in dB. Default 2.0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "design_erasure")]
    design_ebn0: Option<f64>,
    /// Construct from an erasure probability instead of a design SNR.
    #[arg(long)]
    design_erasure: Option<f64>,
    /// Rate used in the design-SNR initial score. Default k/N.
    #[arg(long)]
    design_rate: Option<f64>,
}

#[derive(Args, Debug)]
struct ConstructCmd {
    #[command(flatten)]
    code: CodeArgs,
    /// Output path. Default `<outdir>/code.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecodeFrameCmd {
    #[command(flatten)]
    code: CodeArgs,
    /// Payload as hex (k bits, MSB first). Default: random from the seed.
    #[arg(long)]
    payload: Option<String>,
    /// Read channel LLRs from a file (one float per line) instead of
    /// simulating the channel.
    #[arg(long)]
    llr_file: Option<PathBuf>,
    /// Channel Eb/N0 in dB. Default 2.0.
    #[arg(long, allow_hyphen_values = true)]
    ebn0: Option<f64>,
    /// Disable channel noise.
    #[arg(long)]
    noiseless: bool,
    /// RNG seed. Default 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Decoder: sc | sc_flip | oracle_count | oracle_single_flip.
    #[arg(long)]
    decoder: Option<String>,
    /// Flip trial budget for sc_flip. Default 8.
    #[arg(long = "T")]
    trials: Option<u32>,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flags shared by the experiment recipes. Every value can also come from
/// a JSON config file with identical field names; explicit flags win.
#[derive(Args, Debug, Default)]
struct ExperimentCmd {
    #[command(flatten)]
    code: CodeArgs,
    /// Eb/N0 grid: "start:step:stop" (inclusive), a comma list, or a
    /// single value. Default "1.0:0.5:3.5".
    #[arg(long, allow_hyphen_values = true)]
    ebn0: Option<String>,
    /// Comma list of decoders: sc, sc_flip, oracle_count,
    /// oracle_single_flip. Default depends on the subcommand.
    #[arg(long)]
    decoder: Option<String>,
    /// Comma list of SC-flip trial budgets. Default "4,16,32".
    #[arg(long = "T")]
    trials: Option<String>,
    /// Base RNG seed. Default 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Stop a point once every decoder has this many frame errors.
    /// Default 100.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Hard frame cap per point. Default 10000000.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Worker thread count. Default: all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Disable channel noise (debugging).
    #[arg(long)]
    noiseless: bool,
    /// Use the transmitted rate (k+r)/N instead of the payload rate k/N
    /// in the Eb/N0-to-noise conversion.
    #[arg(long)]
    ebn0_rate_extended: bool,
    /// JSON config file supplying any of the above (field names match the
    /// flag names); explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report JSON path. Default `<outdir>/<command>.json`.
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// CSV path. Default `<outdir>/<command>.csv`.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Gnuplot data path. Default `<outdir>/<command>.dat`.
    #[arg(long)]
    out_dat: Option<PathBuf>,
}

/// JSON mirror of the experiment flags.
#[derive(Deserialize, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ExperimentFile {
    n: Option<u32>,
    k: Option<usize>,
    crc: Option<usize>,
    design_ebn0: Option<f64>,
    design_erasure: Option<f64>,
    design_rate: Option<f64>,
    ebn0: Option<String>,
    decoder: Option<String>,
    #[serde(rename = "T")]
    trials: Option<String>,
    seed: Option<u64>,
    min_errors: Option<u64>,
    max_frames: Option<u64>,
    workers: Option<usize>,
    noiseless: Option<bool>,
    ebn0_rate_extended: Option<bool>,
    out_json: Option<PathBuf>,
    out_csv: Option<PathBuf>,
    out_dat: Option<PathBuf>,
}

enum CliError {
    /// Bad or inconsistent flag values; exits with code 2.
    Usage(String),
    /// Failures after validation (I/O, simulation); exits with code 1.
    Runtime(String),
}

impl CliError {
    fn usage(flag: &str, message: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("invalid value for {flag}: {message}"))
    }
}

impl From<polarflip::Error> for CliError {
    fn from(err: polarflip::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Construct(cmd) => construct(cmd),
        Command::DecodeFrame(cmd) => decode_frame(cmd),
        Command::Fer(cmd) => experiment(cmd, Recipe::Fer),
        Command::Histogram(cmd) => experiment(cmd, Recipe::Histogram),
        Command::Complexity(cmd) => experiment(cmd, Recipe::Complexity),
    }
}

fn out_dir() -> PathBuf {
    std::env::var_os(OUTDIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn default_path(name: &str) -> PathBuf {
    out_dir().join(name)
}

struct ResolvedCode {
    n: u32,
    k: usize,
    r: usize,
    design: Design,
}

impl ResolvedCode {
    fn from_args(args: &CodeArgs) -> Result<Self, CliError> {
        let n = args.n.unwrap_or(10);
        let k = args.k.unwrap_or(512);
        let r = args.crc.unwrap_or(16);
        if !(1..=24).contains(&n) {
            return Err(CliError::usage("--n", format!("{n} outside 1..=24")));
        }
        let block = 1usize << n;
        if k == 0 || k + r >= block {
            return Err(CliError::usage(
                "--k/--crc",
                format!("need 0 < k and k + r < N, got k={k}, r={r}, N={block}"),
            ));
        }
        let design = if let Some(epsilon) = args.design_erasure {
            Design::Erasure { epsilon }
        } else {
            Design::DesignSnr {
                ebn0_db: args.design_ebn0.unwrap_or(2.0),
                rate: args.design_rate.unwrap_or(k as f64 / block as f64),
            }
        };
        Ok(Self { n, k, r, design })
    }

    fn build(&self) -> Result<PolarCode, CliError> {
        let profile = build_reliability(self.n, self.design)
            .map_err(|e| CliError::usage("--design-ebn0/--design-erasure", e))?;
        select_sets(&profile, self.k, self.r).map_err(|e| CliError::usage("--k/--crc", e))
    }

    fn crc_spec(&self) -> Result<CrcSpec, CliError> {
        CrcSpec::default_for_width(self.r).map_err(|e| CliError::usage("--crc", e))
    }
}

fn construct(cmd: ConstructCmd) -> Result<(), CliError> {
    let resolved = ResolvedCode::from_args(&cmd.code)?;
    let code = resolved.build()?;
    let path = cmd.out.unwrap_or_else(|| default_path("code.json"));
    let mut text = code.to_json()?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    println!(
        "wrote {} (N={}, k={}, r={})",
        path.display(),
        code.block_len(),
        code.payload_bits(),
        code.crc_bits()
    );
    Ok(())
}

#[derive(Serialize)]
struct FrameReport {
    code: polarflip::sim::CodeSummary,
    decoder: String,
    trials: u32,
    ebn0_db: Option<f64>,
    noiseless: bool,
    seed: u64,
    payload: BitBlock,
    u: BitBlock,
    u_hat: BitBlock,
    decoded_payload: BitBlock,
    matches: bool,
    crc_pass: Option<bool>,
    attempts_used: u32,
    node_activations: u64,
    channel_error_count: Option<u32>,
    first_error_index: Option<usize>,
}

fn decode_frame(cmd: DecodeFrameCmd) -> Result<(), CliError> {
    let resolved = ResolvedCode::from_args(&cmd.code)?;
    let code = resolved.build()?;
    let crc = resolved.crc_spec()?;
    let seed = cmd.seed.unwrap_or(0);
    let decoder_name = cmd.decoder.as_deref().unwrap_or("sc_flip");
    let trials = cmd.trials.unwrap_or(8);

    let payload = match &cmd.payload {
        Some(hex) => BitBlock::from_hex(hex, code.payload_bits())
            .map_err(|e| CliError::usage("--payload", e))?,
        None => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            BitBlock::from_bits(
                (0..code.payload_bits())
                    .map(|_| rng.random_range(0..2u8))
                    .collect(),
            )
            .unwrap()
        }
    };
    let u = polarflip::codec::assemble_u(&payload, &code, &crc)?;
    let x = encode(&payload, &code, &crc)?;

    let frame = if let Some(path) = &cmd.llr_file {
        let text = std::fs::read_to_string(path)?;
        let llrs: Result<Vec<f64>, _> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse::<f64>)
            .collect();
        let llrs = llrs.map_err(|e| CliError::usage("--llr-file", e))?;
        LlrFrame::new(llrs)?
    } else if cmd.noiseless {
        transmit_noiseless(&x)
    } else {
        let ebn0 = cmd.ebn0.unwrap_or(2.0);
        let spec = ChannelSpec::new(ebn0, code.payload_rate(), seed)
            .map_err(|e| CliError::usage("--ebn0", e))?;
        transmit(&x, &spec, 0)?
    };
    if frame.len() != code.block_len() {
        return Err(CliError::usage(
            "--llr-file",
            format!("{} LLRs for block length {}", frame.len(), code.block_len()),
        ));
    }

    let mut sc = ScDecoder::new(&code);
    let report = match decoder_name {
        "sc" => {
            let out = sc.decode(&frame, None)?;
            let crc_pass = (code.crc_bits() > 0)
                .then(|| check_crc(&out.u_hat, &code, &crc))
                .transpose()?;
            frame_report(
                &cmd,
                &code,
                out.u_hat,
                crc_pass,
                0,
                out.node_activations,
                None,
                None,
                &payload,
                &u,
                decoder_name,
                trials,
                seed,
            )
        }
        "sc_flip" => {
            let res = sc_flip_decode(&mut sc, &crc, &frame, trials)?;
            frame_report(
                &cmd,
                &code,
                res.u_hat,
                Some(res.crc_pass),
                res.attempts_used,
                res.total_activations,
                None,
                None,
                &payload,
                &u,
                decoder_name,
                trials,
                seed,
            )
        }
        "oracle_count" => {
            let res = oracle_count_decode(&mut sc, &frame, &u)?;
            frame_report(
                &cmd,
                &code,
                res.u_hat,
                None,
                0,
                res.node_activations,
                Some(res.channel_error_count),
                res.first_error_index,
                &payload,
                &u,
                decoder_name,
                trials,
                seed,
            )
        }
        "oracle_single_flip" => {
            let out = oracle_single_flip_decode(&mut sc, &frame, &u)?;
            frame_report(
                &cmd,
                &code,
                out.u_hat,
                None,
                0,
                out.node_activations,
                None,
                None,
                &payload,
                &u,
                decoder_name,
                trials,
                seed,
            )
        }
        other => {
            return Err(CliError::usage(
                "--decoder",
                format!("unknown decoder {other:?}"),
            ));
        }
    };

    let mut text = serde_json::to_string_pretty(&report).map_err(polarflip::Error::from)?;
    text.push('\n');
    match cmd.out {
        Some(path) => {
            write_atomic(&path, text.as_bytes())?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn frame_report(
    cmd: &DecodeFrameCmd,
    code: &PolarCode,
    u_hat: BitBlock,
    crc_pass: Option<bool>,
    attempts_used: u32,
    node_activations: u64,
    channel_error_count: Option<u32>,
    first_error_index: Option<usize>,
    payload: &BitBlock,
    u: &BitBlock,
    decoder: &str,
    trials: u32,
    seed: u64,
) -> FrameReport {
    let decoded_payload = extract_payload(&u_hat, code);
    FrameReport {
        code: code_summary(code),
        decoder: decoder.into(),
        trials,
        ebn0_db: if cmd.noiseless || cmd.llr_file.is_some() {
            None
        } else {
            Some(cmd.ebn0.unwrap_or(2.0))
        },
        noiseless: cmd.noiseless,
        seed,
        payload: payload.clone(),
        u: u.clone(),
        matches: u_hat == *u,
        u_hat,
        decoded_payload,
        crc_pass,
        attempts_used,
        node_activations,
        channel_error_count,
        first_error_index,
    }
}

fn code_summary(code: &PolarCode) -> polarflip::sim::CodeSummary {
    polarflip::sim::CodeSummary::of(code)
}

#[derive(Clone, Copy, PartialEq)]
enum Recipe {
    Fer,
    Histogram,
    Complexity,
}

impl Recipe {
    fn name(&self) -> &'static str {
        match self {
            Recipe::Fer => "fer",
            Recipe::Histogram => "histogram",
            Recipe::Complexity => "complexity",
        }
    }
}

fn experiment(mut cmd: ExperimentCmd, recipe: Recipe) -> Result<(), CliError> {
    if let Some(path) = &cmd.config {
        let text = std::fs::read_to_string(path)?;
        let file: ExperimentFile =
            serde_json::from_str(&text).map_err(|e| CliError::usage("--config", e))?;
        merge_config(&mut cmd, file);
    }

    let resolved = ResolvedCode::from_args(&cmd.code)?;
    let grid = parse_grid(cmd.ebn0.as_deref().unwrap_or("1.0:0.5:3.5"))
        .map_err(|e| CliError::usage("--ebn0", e))?;
    let trials = parse_trials(cmd.trials.as_deref().unwrap_or("4,16,32"))
        .map_err(|e| CliError::usage("--T", e))?;
    let decoders = match recipe {
        Recipe::Fer => parse_decoders(cmd.decoder.as_deref().unwrap_or("sc,sc_flip"), &trials)
            .map_err(|e| CliError::usage("--decoder", e))?,
        Recipe::Histogram => vec![DecoderKind::OracleCount],
        Recipe::Complexity => trials
            .iter()
            .map(|&t| DecoderKind::ScFlip { max_trials: t })
            .collect(),
    };

    let mut plan = ExperimentPlan::new(resolved.n, resolved.k, resolved.r)
        .map_err(|e| CliError::usage("--crc", e))?;
    plan.design = resolved.design;
    plan.decoders = decoders;
    plan.ebn0_grid = grid;
    plan.base_seed = cmd.seed.unwrap_or(0);
    plan.min_frame_errors = cmd.min_errors.unwrap_or(100);
    plan.max_frames = cmd.max_frames.unwrap_or(10_000_000);
    plan.noiseless = cmd.noiseless;
    plan.rate_convention = if cmd.ebn0_rate_extended {
        RateConvention::Extended
    } else {
        RateConvention::Payload
    };
    plan.validate()
        .map_err(|e| CliError::usage("--n/--k/--crc/--ebn0", e))?;

    if let Some(workers) = cmd.workers {
        if workers == 0 {
            return Err(CliError::usage("--workers", "must be at least 1"));
        }
        // ignore the error if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }

    let report = run_sweep(&plan)?;

    let json_path = cmd
        .out_json
        .unwrap_or_else(|| default_path(&format!("{}.json", recipe.name())));
    let csv_path = cmd
        .out_csv
        .unwrap_or_else(|| default_path(&format!("{}.csv", recipe.name())));
    let dat_path = cmd
        .out_dat
        .unwrap_or_else(|| default_path(&format!("{}.dat", recipe.name())));
    write_report_json(&report, &json_path)?;
    write_report_csv(&report, &csv_path)?;
    let dat = match recipe {
        Recipe::Fer => fer_dat(&report),
        Recipe::Histogram => histogram_dat(&report),
        Recipe::Complexity => complexity_dat(&report),
    };
    write_atomic(&dat_path, dat.as_bytes())?;

    print_summary(&report, recipe);
    println!(
        "wrote {}, {}, {}",
        json_path.display(),
        csv_path.display(),
        dat_path.display()
    );
    Ok(())
}

fn merge_config(cmd: &mut ExperimentCmd, file: ExperimentFile) {
    // explicit flags win over the config file
    cmd.code.n = cmd.code.n.or(file.n);
    cmd.code.k = cmd.code.k.or(file.k);
    cmd.code.crc = cmd.code.crc.or(file.crc);
    cmd.code.design_ebn0 = cmd.code.design_ebn0.or(file.design_ebn0);
    cmd.code.design_erasure = cmd.code.design_erasure.or(file.design_erasure);
    cmd.code.design_rate = cmd.code.design_rate.or(file.design_rate);
    cmd.ebn0 = cmd.ebn0.take().or(file.ebn0);
    cmd.decoder = cmd.decoder.take().or(file.decoder);
    cmd.trials = cmd.trials.take().or(file.trials);
    cmd.seed = cmd.seed.or(file.seed);
    cmd.min_errors = cmd.min_errors.or(file.min_errors);
    cmd.max_frames = cmd.max_frames.or(file.max_frames);
    cmd.workers = cmd.workers.or(file.workers);
    cmd.noiseless = cmd.noiseless || file.noiseless.unwrap_or(false);
    cmd.ebn0_rate_extended = cmd.ebn0_rate_extended || file.ebn0_rate_extended.unwrap_or(false);
    cmd.out_json = cmd.out_json.take().or(file.out_json);
    cmd.out_csv = cmd.out_csv.take().or(file.out_csv);
    cmd.out_dat = cmd.out_dat.take().or(file.out_dat);
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if let Some((start, rest)) = text.split_once(':') {
        let (step, stop) = rest
            .split_once(':')
            .ok_or_else(|| format!("expected start:step:stop, got {text:?}"))?;
        let start: f64 = start.trim().parse().map_err(|e| format!("{e}"))?;
        let step: f64 = step.trim().parse().map_err(|e| format!("{e}"))?;
        let stop: f64 = stop.trim().parse().map_err(|e| format!("{e}"))?;
        if step <= 0.0 || stop < start {
            return Err(format!(
                "bad grid {text:?}: need step > 0 and stop >= start"
            ));
        }
        // small slack so binary-inexact steps still reach the stop point,
        // without ever emitting a point beyond it
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    } else {
        text.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{e}")))
            .collect()
    }
}

fn parse_trials(text: &str) -> Result<Vec<u32>, String> {
    let values: Result<Vec<u32>, String> = text
        .split(',')
        .map(|v| v.trim().parse::<u32>().map_err(|e| format!("{e}")))
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err("empty trial list".into());
    }
    Ok(values)
}

fn parse_decoders(text: &str, trials: &[u32]) -> Result<Vec<DecoderKind>, String> {
    let mut decoders = Vec::new();
    for name in text.split(',').map(str::trim) {
        match name {
            "sc" => decoders.push(DecoderKind::Sc),
            "sc_flip" => {
                for &t in trials {
                    decoders.push(DecoderKind::ScFlip { max_trials: t });
                }
            }
            "oracle_count" => decoders.push(DecoderKind::OracleCount),
            "oracle_single_flip" => decoders.push(DecoderKind::OracleSingleFlip),
            other => return Err(format!("unknown decoder {other:?}")),
        }
    }
    if decoders.is_empty() {
        return Err("empty decoder list".into());
    }
    Ok(decoders)
}

fn print_summary(report: &ExperimentReport, recipe: Recipe) {
    match recipe {
        Recipe::Histogram => {
            for point in &report.points {
                println!(
                    "# Eb/N0 = {} dB, {} error frames",
                    point.ebn0_db, point.decoders[0].frame_errors
                );
                println!("{:>7} {:>12}", "errors", "rel_freq");
                if let Some(hist) = &point.decoders[0].histogram {
                    for bin in &hist.bins {
                        println!("{:>7} {:>12.6}", bin.errors, bin.relative_frequency);
                    }
                    if hist.overflow_count > 0 {
                        println!("{:>7} {:>12.6}", ">50", hist.overflow_frequency);
                    }
                }
            }
        }
        _ => {
            println!(
                "{:>8} {:<18} {:>10} {:>8} {:>12} {:>12} {:>9} {:>10}",
                "ebn0_db", "decoder", "frames", "errors", "fer", "ber", "attempts", "norm_cplx"
            );
            for point in &report.points {
                for dec in &point.decoders {
                    println!(
                        "{:>8} {:<18} {:>10} {:>8} {:>12.6e} {:>12.6e} {:>9.3} {:>10.4}{}",
                        point.ebn0_db,
                        dec.decoder,
                        dec.frames,
                        dec.frame_errors,
                        dec.fer,
                        dec.ber,
                        dec.mean_attempts,
                        dec.normalized_complexity,
                        if point.reached_min_errors {
                            ""
                        } else {
                            "  (frame cap)"
                        }
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_start_step_stop_is_inclusive() {
        assert_eq!(
            parse_grid("1.0:0.5:3.5").unwrap(),
            vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5]
        );
        assert_eq!(parse_grid("2.0:1.0:2.0").unwrap(), vec![2.0]);
        // a stop that is not on the lattice is never overshot
        assert_eq!(
            parse_grid("1.0:0.5:3.4").unwrap(),
            vec![1.0, 1.5, 2.0, 2.5, 3.0]
        );
        // steps that are not binary-exact still reach the stop
        assert_eq!(parse_grid("1.0:0.1:2.0").unwrap().len(), 11);
    }

    #[test]
    fn grid_lists_and_errors() {
        assert_eq!(parse_grid("2.0").unwrap(), vec![2.0]);
        assert_eq!(parse_grid("1.5,2.5,-0.5").unwrap(), vec![1.5, 2.5, -0.5]);
        assert!(parse_grid("3.0:0.5:1.0").is_err());
        assert!(parse_grid("1.0:0.0:2.0").is_err());
        assert!(parse_grid("a:b:c").is_err());
    }

    #[test]
    fn decoder_list_expands_trials() {
        let decoders = parse_decoders("sc,sc_flip,oracle_count", &[4, 16]).unwrap();
        assert_eq!(
            decoders,
            vec![
                DecoderKind::Sc,
                DecoderKind::ScFlip { max_trials: 4 },
                DecoderKind::ScFlip { max_trials: 16 },
                DecoderKind::OracleCount,
            ]
        );
        assert!(parse_decoders("bogus", &[4]).is_err());
        assert!(parse_trials("4,x").is_err());
    }
}
