//! Criterion benchmarks for the workbench; run with `cargo bench -p sts-bench`.
