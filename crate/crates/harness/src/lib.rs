//! Scenario parsing, execution, and artifact plumbing behind the `tdho-lab`
//! binary; exposed as a library so integration suites can drive runs
//! in-process.

pub mod output;
pub mod runner;
pub mod scenario;
pub mod sweep;
