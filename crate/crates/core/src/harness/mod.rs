//! Experiment drivers, trace persistence and the command-line front end.
//!
//! Each driver runs seeded trials in parallel and returns one [`RunRecord`]
//! per optimizer and problem size. [`write_outputs`] persists them as
//! `<out>/<experiment>/<timestamp>_<seed>/` containing trace CSVs and a
//! `summary.json`.

mod cli;
mod experiment;
mod output;
mod states;

pub use cli::cli_main;
pub use experiment::{
    derive_seed, median_reached, run_comparison, run_layer_sweep, run_record, run_scaling,
    run_state_prep, run_vqe, scaling_depth, state_prep_target, AnsatzKind, ExperimentConfig,
    HamiltonianSource, MeanStd, OptimizerKind, OptimizerSettings, RunRecord, RunStats, Task,
    TrialSummary,
};
pub use output::{trace_file_name, write_outputs, write_trace_csv};
pub use states::{haar_random_state, trace_distance_pure};
