//! Criterion benchmarks for the classifier; see `benches/classify.rs`.
