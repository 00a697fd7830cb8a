//! Load a Hamiltonian from the text format (one `weight WORD` per line) and
//! minimize it. Defaults to the bundled 2-qubit H2 Hamiltonian.
//!
//! `cargo run --example hamiltonian_from_file [path]`

use rotoselect::prelude::*;

fn main() -> Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_sto3g_parity.txt").into());
    let h = Hamiltonian::from_file(&path)?;
    let bounds = h.exact_spectrum_bounds()?;
    println!("{} terms on {} qubits, spectrum [{:.6}, {:.6}]", h.len(), h.num_qubits(), bounds.e_min, bounds.e_max);

    let n = h.num_qubits().max(2);
    let objective = Objective::Hamiltonian(h);
    let circuit = build_layered_ansatz(n, 3, 1)?;
    let run = RunSettings::exact(StoppingCriterion::MaxCycles(50), 0);
    let trace = rotoselect(circuit, &objective, &RotoselectSettings::default(), &run)?;
    println!(
        "rotoselect best {:.6} after {} evaluations (error {:.2e})",
        trace.best_energy,
        trace.evaluations,
        trace.best_energy - bounds.e_min
    );
    Ok(())
}
