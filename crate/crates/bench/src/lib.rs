//! Criterion benchmarks for twistloop; see `benches/`.
