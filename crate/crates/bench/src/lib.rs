//! Benchmarks for selfsim live under `benches/`.
