//! Command line front end: JSON formats, seeded test paths, verification
//! suites and the `stasheff` commands.

pub mod cli;
pub mod factory;
pub mod json;
pub mod suites;
