//! Experiment configuration, multi-seed runs, output files and the
//! verifier and bound tables exposed by the command-line tool.

pub mod config;
pub mod output;
pub mod run;
pub mod suites;

pub use config::{ExperimentConfig, PolicySpec};
pub use output::{emit_outputs, emit_sweep};
pub use run::{run_experiment, sensitivity_sweep, AggregateResult, ExperimentResult, RunTrace, SweepRow};
