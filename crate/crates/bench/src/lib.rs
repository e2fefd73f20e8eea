//! Benchmarks for Hall products, extension censuses, submodule lattices and
//! decomposition; see `benches/hall.rs`.
