//! Criterion benchmarks for `torsion-core`; see `benches/kernels.rs`.
