//! End-to-end acceptance checks for `hgm-core`.
//!
//! The checks live in `tests/acceptance.rs`, a plain binary that prints one
//! `criterion N: PASS|FAIL` line per criterion. Run a subset by passing
//! criterion numbers: `cargo test -p hgm-validation --test acceptance -- 2 6`.
