//! Polar-code forward error correction toolkit.
//!
//! Building blocks:
//!
//! * [`construction`] — reliability scores and frozen/information sets,
//!   including the CRC extension of the information set
//! * [`codec`] — the polar transform, payload/CRC assembly and checking
//! * [`sc`] — the successive cancellation decoder over the min-sum f/g
//!   graph, with O(N) workspace reuse and exact operation counting
//! * [`flip`] — CRC-aided SC flip decoding plus two oracle-assisted
//!   reference decoders
//! * [`channel`] — BPSK over AWGN with seeded, per-frame noise streams
//! * [`sim`] — a reproducible parallel Monte Carlo harness for FER/BER
//!   sweeps, error-count histograms and complexity measurements
//!
//! Channel index sets are 1-based across the public API; bit positions
//! inside [`bits::BitBlock`] are 0-based.
//!
//! ```
//! use polarflip::channel::{transmit, ChannelSpec};
//! use polarflip::{build_reliability, select_sets, BitBlock, CrcSpec, Design, ScDecoder};
//!
//! // N = 256, 100 payload bits protected by a 16-bit CRC
//! let design = Design::DesignSnr { ebn0_db: 2.0, rate: 100.0 / 256.0 };
//! let profile = build_reliability(8, design)?;
//! let code = select_sets(&profile, 100, 16)?;
//! let crc = CrcSpec::ccitt_false();
//!
//! let payload = BitBlock::from_hex("fede110c0ffee0ddf00dbabe5", 100)?;
//! let codeword = polarflip::codec::encode(&payload, &code, &crc)?;
//!
//! let spec = ChannelSpec::new(2.5, code.payload_rate(), 42)?;
//! let frame = transmit(&codeword, &spec, 0)?;
//!
//! let mut decoder = ScDecoder::new(&code);
//! let result = polarflip::sc_flip_decode(&mut decoder, &crc, &frame, 8)?;
//! if result.crc_pass {
//!     let decoded = polarflip::codec::extract_payload(&result.u_hat, &code);
//!     assert_eq!(decoded, payload);
//! }
//! # Ok::<(), polarflip::Error>(())
//! ```

pub mod bits;
pub mod channel;
pub mod codec;
pub mod construction;
pub mod crc;
pub mod error;
pub mod flip;
pub mod sc;
pub mod sim;

pub use bits::BitBlock;
pub use channel::ChannelSpec;
pub use construction::{build_reliability, select_sets, Design, PolarCode, ReliabilityProfile};
pub use crc::CrcSpec;
pub use error::{Error, Result};
pub use flip::{sc_flip_decode, FlipResult, OracleResult};
pub use sc::{DecodeOutcome, LlrFrame, ScDecoder};
pub use sim::{run_point, run_sweep, DecoderKind, ExperimentPlan, ExperimentReport};
