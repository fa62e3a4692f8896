//! Criterion benchmarks for the numerical kernels live in `benches/`.
//! Run them with `cargo bench -p deltoid-bench`.
