// Bench-only crate; see benches/codec.rs.
