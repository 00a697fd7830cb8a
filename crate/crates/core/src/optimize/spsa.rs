use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{OptimizerTrace, Recorder, RunSettings};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::estimator::{Estimator, Objective};

/// Gains `a_k = a / (k + 1 + stability)^alpha`, `c_k = c / (k + 1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaSettings {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub stability: f64,
}

impl Default for SpsaSettings {
    fn default() -> Self {
        Self {
            a: 0.15,
            c: 0.1,
            alpha: 0.602,
            gamma: 0.101,
            stability: 0.0,
        }
    }
}

impl SpsaSettings {
    fn validate(&self) -> Result<()> {
        let ok = self.a > 0.0
            && self.c > 0.0
            && self.alpha > 0.0
            && self.gamma > 0.0
            && self.stability >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid SPSA settings {self:?}")))
        }
    }
}

/// Simultaneous-perturbation stochastic approximation with Rademacher
/// perturbations: two evaluations per step regardless of dimension.
///
/// As with [`super::adam`], the per-step energy in the trace is the
/// noise-free energy of the new angles and is not counted.
pub fn spsa(
    mut circuit: Circuit,
    objective: &Objective,
    settings: &SpsaSettings,
    run: &RunSettings,
) -> Result<OptimizerTrace> {
    settings.validate()?;
    if circuit.num_rotations() == 0 {
        return Err(Error::Config("circuit has no rotation gates".into()));
    }
    let mut recorder = Recorder::new("spsa", run, &circuit)?;
    let mut estimator = Estimator::new(objective, run.estimator);
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let dim = circuit.num_rotations();
    let mut theta = circuit.angles();
    let mut probe = circuit.clone();
    let mut k: u64 = 0;
    loop {
        let a_k = settings.a / (k as f64 + 1.0 + settings.stability).powf(settings.alpha);
        let c_k = settings.c / (k as f64 + 1.0).powf(settings.gamma);
        let delta: Vec<f64> = (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();

        let shifted: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + c_k * d).collect();
        probe.set_angles(&shifted)?;
        let y_plus = estimator.energy(&probe)?;
        let shifted: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - c_k * d).collect();
        probe.set_angles(&shifted)?;
        let y_minus = estimator.energy(&probe)?;

        let scale = (y_plus - y_minus) / (2.0 * c_k);
        for (t, d) in theta.iter_mut().zip(&delta) {
            // 1/Δ_i = Δ_i for Δ_i = ±1
            *t -= a_k * scale * d;
        }
        circuit.set_angles(&theta)?;
        k += 1;

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
