//! Benchmark-only crate; see `benches/deciders.rs`.
