//! Prepare Haar-random 4-qubit states with circuit #15 by minimizing
//! `−|⟨φ|ψ(θ)⟩|²`, then report the trace distance for several depths.
//!
//! `cargo run --release --example state_preparation`

use rotoselect::harness::{run_state_prep, ExperimentConfig, OptimizerKind};
use rotoselect::prelude::*;

fn main() -> Result<()> {
    let config = ExperimentConfig::state_prep(4, 1, StoppingCriterion::MaxCycles(30))
        .with_optimizers(&[OptimizerKind::Rotosolve, OptimizerKind::Rotoselect])
        .with_trials(4)
        .with_seed(11);
    let records = run_state_prep(&config, &[1, 3, 5])?;
    println!("{:<11} {:>6} {:>10} {:>8}", "optimizer", "layers", "mean d", "std");
    for r in &records {
        let d = r.stats.trace_distance.as_ref().unwrap();
        println!("{:<11} {:>6} {:>10.4} {:>8.4}", r.optimizer, r.layers(), d.mean, d.std);
    }
    Ok(())
}
