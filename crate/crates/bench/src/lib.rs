//! Benchmarks for `otto-core`; see `benches/`.
