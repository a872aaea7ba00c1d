//! Holds the `acceptance` test target; there is no library code.
//!
//! Run with `cargo test -p cp-entangle-validation --test acceptance`.
