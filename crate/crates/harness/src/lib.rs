//! Experiment harness for the seldonian-core toolkit: configuration,
//! CSV ingestion and emission, seeded multi-trial experiment sweeps with
//! oracle-graded summaries, and a battery of analytic-versus-Monte-Carlo
//! self checks.

pub mod config;
pub mod csvio;
pub mod oracle;
pub mod runner;
