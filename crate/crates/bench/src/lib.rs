//! Benchmarks for the reconstruction and spatial-operator kernels live in
//! `benches/`.
