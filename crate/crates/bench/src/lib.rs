//! Benchmarks for encoding, scalar evolution and decoding; see `benches/polar.rs`.
