//! Benchmark-only crate; see `benches/kernels.rs`. Holds no library
//! code of its own.
