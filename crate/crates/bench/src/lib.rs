//! Benchmark-only crate; see `benches/decoding.rs`.
