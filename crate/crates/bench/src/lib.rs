//! Criterion benchmarks for `shearconv-core`; see `benches/`.
