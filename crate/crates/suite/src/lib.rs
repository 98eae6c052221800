//! Holds the `acceptance` test target; run it with
//! `cargo test -p exactpr-suite --test acceptance`.
