//! Benchmark-only crate; see benches/products.rs.
