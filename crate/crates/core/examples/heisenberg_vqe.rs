//! Rotoselect on the 5-qubit Heisenberg ring with the layered CZ ansatz.
//!
//! `cargo run --release --example heisenberg_vqe`

use rotoselect::prelude::*;

fn main() -> Result<()> {
    let h = Hamiltonian::heisenberg(5, 1.0, 1.0)?;
    let bounds = h.exact_spectrum_bounds()?;
    let objective = Objective::Hamiltonian(h);
    let circuit = build_layered_ansatz(5, 6, 42)?;
    let run = RunSettings::exact(StoppingCriterion::MaxCycles(100), 7);

    let trace = rotoselect(circuit, &objective, &RotoselectSettings::default(), &run)?;
    let per_cycle = trace.records.len() / trace.cycles_completed.max(1);
    for (cycle, chunk) in trace.records.chunks(per_cycle).enumerate().step_by(10) {
        let last = chunk.last().unwrap();
        println!("cycle {cycle:>3}  evals {:>6}  energy {:.6}", last.cumulative_evals, last.energy);
    }
    println!(
        "best {:.6}  ground {:.6}  normalized distance {:.4}",
        trace.best_energy,
        bounds.e_min,
        bounds.normalized_distance(trace.best_energy)
    );
    let generators: String = trace.best_generators().iter().map(|g| g.label()).collect();
    println!("learned generators {generators}");
    Ok(())
}
