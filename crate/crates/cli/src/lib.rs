//! Front end for `sumset-core`: argument parsing, JSON reports and the
//! pinned-seed test batteries.

pub mod args;
pub mod harness;
pub mod run;
