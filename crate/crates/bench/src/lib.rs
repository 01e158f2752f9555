//! Criterion benchmarks for the solvers and oracles; see `benches/`.
