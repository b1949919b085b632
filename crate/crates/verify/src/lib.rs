//! Holds the `acceptance` test target (`cargo test -p qadlab-verify --test acceptance`).
//!
//! It lives in its own package so that it runs after every other test binary
//! in `cargo test --workspace`.
