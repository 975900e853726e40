//! Experiment harness for `smk-core`: specifications, trial runner, CSV and
//! SVG output, configuration handling and the acceptance suites behind the
//! `smk` binary.

pub mod config;
pub mod experiment;
pub mod output;
pub mod stats;
pub mod suites;

pub use experiment::{run_experiment, run_sweep, Algorithm, ExperimentRecord, ExperimentSpec, ObjectiveKind, Source};
