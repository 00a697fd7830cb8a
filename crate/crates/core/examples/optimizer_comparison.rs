//! Evaluations needed by each optimizer to reach 5% of the spectral width
//! above the ground energy, sharing initial circuits per trial.
//!
//! `cargo run --release --example optimizer_comparison`

use rotoselect::harness::{run_comparison, ExperimentConfig};
use rotoselect::prelude::*;

fn main() -> Result<()> {
    let mut config = ExperimentConfig::heisenberg(4, 8, StoppingCriterion::MaxEvaluations(40_000))
        .with_trials(3)
        .with_seed(2);
    config.stop_at_threshold = true;
    let records = run_comparison(&config)?;
    if let Some(t) = records[0].threshold_energy {
        println!("threshold energy {t:.4}");
    }
    for r in &records {
        let median = r
            .stats
            .median_evaluations_to_threshold
            .map_or("not reached".to_string(), |m| format!("{m:.0}"));
        println!(
            "{:<11} median evals {median:>12}  reached {}/{}  best mean {:.4}",
            r.optimizer.name(),
            r.stats.trials_reaching_threshold,
            r.trials.len(),
            r.stats.best_energy.mean
        );
    }
    Ok(())
}
