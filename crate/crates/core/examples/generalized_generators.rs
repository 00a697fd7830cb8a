//! Rotations about arbitrary axes and conjugated Pauli generators `V P V†`
//! still produce sinusoidal energy curves, so Rotosolve applies unchanged.
//!
//! `cargo run --example generalized_generators`

use num_complex::Complex64;
use rotoselect::prelude::*;

fn main() -> Result<()> {
    let h = Hamiltonian::heisenberg(3, 1.0, 0.5)?;
    let bounds = h.exact_spectrum_bounds()?;
    let objective = Objective::Hamiltonian(h);

    // Hadamard ⊗ I as the conjugator turns Z⊗Z into X⊗Z.
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (p, m, z) = (Complex64::new(s, 0.0), Complex64::new(-s, 0.0), Complex64::new(0.0, 0.0));
    let hadamard_i = vec![
        p, z, p, z, //
        z, p, z, p, //
        p, z, m, z, //
        z, p, z, m,
    ];
    let zz = PauliString::new(vec![Pauli::Z, Pauli::Z])?;
    let conjugated = Generator::Conjugated(ConjugatedGenerator::new(zz, hadamard_i)?);

    let mut circuit = Circuit::new(3)?;
    for layer in 0..3 {
        for q in 0..3 {
            let axis = UnitVector3::normalized(1.0, 0.5 * q as f64, 0.3 * layer as f64 + 0.2)?;
            circuit.push_rotation(q, Generator::Axis(axis), 0.1 * (q + layer) as f64)?;
        }
        circuit.push_rotation(layer % 2, conjugated.clone(), 0.3)?;
        circuit.push_cz(0, 1)?;
        circuit.push_cz(1, 2)?;
    }

    let run = RunSettings::exact(StoppingCriterion::MaxCycles(60), 0);
    let trace = rotosolve(circuit, &objective, &RotosolveSettings::default(), &run)?;
    println!(
        "{} rotations, best {:.6}, ground {:.6}, normalized distance {:.4}",
        trace.best_circuit.num_rotations(),
        trace.best_energy,
        bounds.e_min,
        bounds.normalized_distance(trace.best_energy)
    );
    Ok(())
}
