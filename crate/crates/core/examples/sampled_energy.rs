//! Shot noise in the energy estimate and Rotosolve under a finite budget.
//!
//! `cargo run --release --example sampled_energy`

use rotoselect::estimator::energy;
use rotoselect::prelude::*;

fn main() -> Result<()> {
    let h = Hamiltonian::heisenberg(3, 1.0, 1.0)?;
    let circuit = build_layered_ansatz(3, 2, 8)?;
    let mut counter = EvalCounter::new();
    let exact = energy(&circuit, &h, EstimatorConfig::Exact, &mut counter)?;
    println!("exact {exact:.6}");
    for shots in [10, 100, 1_000, 10_000, 100_000] {
        let estimates: Vec<f64> = (0..20)
            .map(|s| energy(&circuit, &h, EstimatorConfig::sampled(shots, s)?, &mut counter))
            .collect::<Result<_>>()?;
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let spread = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 19.0).sqrt();
        println!("{shots:>7} shots/term  mean {mean:>9.5}  std {spread:.5}");
    }

    let bounds = h.exact_spectrum_bounds()?;
    let objective = Objective::Hamiltonian(h);
    let run = RunSettings::sampled(StoppingCriterion::MaxCycles(100), 1000, 3)?;
    let trace = rotosolve(build_layered_ansatz(3, 6, 4)?, &objective, &RotosolveSettings::default(), &run)?;
    let final_exact = objective.exact(&trace.final_circuit.output_state()?)?;
    println!(
        "rotosolve with 1000 shots: final exact {final_exact:.5}, normalized distance {:.4}, {} evaluations",
        bounds.normalized_distance(final_exact),
        trace.evaluations
    );
    Ok(())
}
