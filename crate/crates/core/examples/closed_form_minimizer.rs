//! Three energy probes pin down the whole curve along one angle.
//!
//! `cargo run --example closed_form_minimizer`

use std::f64::consts::FRAC_PI_2;

use rotoselect::prelude::*;
use rotoselect::sinusoid;

fn energy_at(circuit: &mut Circuit, d: usize, theta: f64, h: &Hamiltonian) -> Result<f64> {
    circuit.set_angle(d, theta)?;
    h.expectation(&circuit.output_state()?)
}

fn main() -> Result<()> {
    let h = Hamiltonian::heisenberg(3, 1.0, 1.0)?;
    let mut circuit = build_layered_ansatz(3, 2, 5)?;
    let d = 2;
    let phi = 0.4;
    let probes = ProbeTriple::new(
        phi,
        energy_at(&mut circuit, d, phi, &h)?,
        energy_at(&mut circuit, d, phi + FRAC_PI_2, &h)?,
        energy_at(&mut circuit, d, phi - FRAC_PI_2, &h)?,
    );
    let fit = sinusoid::fit(&probes)?;
    println!(
        "A = {:.6}  B = {:.6}  C = {:.6}",
        fit.amplitude, fit.phase, fit.intercept
    );

    for k in 0..8 {
        let theta = -3.0 + 0.75 * k as f64;
        let exact = energy_at(&mut circuit, d, theta, &h)?;
        println!("θ = {theta:>5.2}  fit {:>9.6}  exact {exact:>9.6}", fit.value_at(theta));
    }

    let theta_star = sinusoid::optimal_angle(&probes)?;
    let at_star = energy_at(&mut circuit, d, theta_star, &h)?;
    println!(
        "θ* = {theta_star:.6}  E(θ*) = {at_star:.6}  extrapolated {:.6}",
        fit.extrapolated_minimum()
    );
    Ok(())
}
