//! Criterion benchmarks for quanta-stats; see `benches/`.
