//! Rotoselect changes gate generators as well as angles. Prints how many
//! generators change per cycle and compares against Rotosolve, which keeps
//! the initial structure.
//!
//! `cargo run --release --example structure_learning`

use rotoselect::prelude::*;

fn main() -> Result<()> {
    let h = Hamiltonian::heisenberg(4, 1.0, 1.0)?;
    let bounds = h.exact_spectrum_bounds()?;
    let objective = Objective::Hamiltonian(h);
    let circuit = build_layered_ansatz(4, 3, 19)?;
    let run = RunSettings::exact(StoppingCriterion::MaxCycles(40), 1);

    let select = rotoselect(circuit.clone(), &objective, &RotoselectSettings::default(), &run)?;
    let solve = rotosolve(circuit, &objective, &RotosolveSettings::default(), &run)?;

    println!("generator changes per cycle: {:?}", select.generator_changes_per_cycle());
    println!("initial  {}", select.initial_generators.concat());
    let learned: String = select.best_generators().iter().map(|g| g.label()).collect();
    println!("learned  {learned}");
    for t in [&solve, &select] {
        println!(
            "{:<10} best {:.6}  normalized distance {:.4}  evals {}",
            t.optimizer,
            t.best_energy,
            bounds.normalized_distance(t.best_energy),
            t.evaluations
        );
    }
    Ok(())
}
