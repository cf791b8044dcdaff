//! Benchmark-only crate; the Criterion suites live in `benches/`.
