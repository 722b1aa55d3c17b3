//! Criterion benchmarks for gbord-core live under `benches/`.
