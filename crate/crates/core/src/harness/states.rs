use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::qstate::StateVector;

/// Trace distance between two pure states, `√(1 − |⟨a|b⟩|²)`.
pub fn trace_distance_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    let fidelity = a.fidelity(b)?;
    Ok((1.0 - fidelity).max(0.0).sqrt())
}

/// Haar-random pure state: i.i.d. complex standard normals, normalized.
pub fn haar_random_state(n: usize, seed: u64) -> Result<StateVector> {
    // validates n before allocating 2^n samples
    let dim = StateVector::zero(n)?.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amplitudes = (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    StateVector::normalized(amplitudes)
}
