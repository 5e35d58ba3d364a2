//! Criterion benchmarks for the reslie kernels live in `benches/`.
