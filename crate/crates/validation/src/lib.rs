//! Acceptance checks for `fitness-evo`.
//!
//! Everything lives in `tests/acceptance.rs`; run it with
//! `cargo test -p fitness-evo-validation --test acceptance [-- <criterion>...]`.
