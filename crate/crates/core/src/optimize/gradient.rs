use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{OptimizerTrace, Recorder, RunSettings};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::estimator::{Estimator, Objective};

/// `∂E/∂θ_d = (E(θ_d + π/2) − E(θ_d − π/2)) / 2` for every rotation, using
/// `2D` evaluations. Exact for any generator with `H² = I`.
pub fn parameter_shift_gradient(circuit: &Circuit, estimator: &mut Estimator<'_>) -> Result<Vec<f64>> {
    let mut shifted = circuit.clone();
    let mut gradient = Vec::with_capacity(circuit.num_rotations());
    for d in 0..circuit.num_rotations() {
        let theta = circuit.angle(d)?;
        shifted.set_angle(d, theta + FRAC_PI_2)?;
        let plus = estimator.energy(&shifted)?;
        shifted.set_angle(d, theta - FRAC_PI_2)?;
        let minus = estimator.energy(&shifted)?;
        shifted.set_angle(d, theta)?;
        gradient.push(0.5 * (plus - minus));
    }
    Ok(gradient)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamSettings {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamSettings {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamSettings {
    fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid Adam settings {self:?}")))
        }
    }
}

/// Adam over parameter-shift gradients. One step is one "cycle".
///
/// The energy reported per step is the noise-free energy of the new angles,
/// computed outside the evaluation budget; the optimizer itself only sees
/// the gradients.
pub fn adam(
    mut circuit: Circuit,
    objective: &Objective,
    settings: &AdamSettings,
    run: &RunSettings,
) -> Result<OptimizerTrace> {
    settings.validate()?;
    if circuit.num_rotations() == 0 {
        return Err(Error::Config("circuit has no rotation gates".into()));
    }
    let mut recorder = Recorder::new("adam", run, &circuit)?;
    let mut estimator = Estimator::new(objective, run.estimator);
    let dim = circuit.num_rotations();
    let mut theta = circuit.angles();
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut step: i32 = 0;
    loop {
        let g = parameter_shift_gradient(&circuit, &mut estimator)?;
        step = step.saturating_add(1);
        let bias1 = 1.0 - settings.beta1.powi(step);
        let bias2 = 1.0 - settings.beta2.powi(step);
        for i in 0..dim {
            m[i] = settings.beta1 * m[i] + (1.0 - settings.beta1) * g[i];
            v[i] = settings.beta2 * v[i] + (1.0 - settings.beta2) * g[i] * g[i];
            let m_hat = m[i] / bias1;
            let v_hat = v[i] / bias2;
            theta[i] -= settings.learning_rate * m_hat / (v_hat.sqrt() + settings.epsilon);
        }
        circuit.set_angles(&theta)?;
        let energy = estimator.exact(&circuit)?;
        if let Some(reason) = recorder.record(&estimator, &circuit, None, energy, false)? {
            let evals = estimator.evaluations();
            return Ok(recorder.finish(circuit, evals, reason));
        }
        if let Some(reason) = recorder.end_cycle() {
            let evals = estimator.evaluations();
            return Ok(recorder.finish(circuit, evals, reason));
        }
    }
}
