//! Criterion benchmarks for the core pipeline live in `benches/`.
