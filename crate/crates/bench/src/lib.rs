//! Benchmarks for `bicm-core` live in `benches/`.
