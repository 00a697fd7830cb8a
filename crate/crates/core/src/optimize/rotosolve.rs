use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{OptimizerTrace, Recorder, RunSettings};
use crate::circuit::{random_angle, Circuit, Generator};
use crate::error::{Error, Result};
use crate::estimator::{Estimator, Objective};
use crate::sinusoid::{self, ProbeTriple, SinusoidFit, EXACT_FLAT_THRESHOLD};

/// How Rotosolve picks the probe offset `φ` for each update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiPolicy {
    /// `φ` equals the gate's current angle.
    Current,
    /// `φ` drawn uniformly from `(−π, π]`.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotosolveSettings {
    pub phi_policy: PhiPolicy,
    /// Reuse the previous update's energy as the `φ` probe. Forces
    /// `φ` = current angle from the second update on.
    pub reuse: bool,
    /// Curves with fitted amplitude below this keep their current angle.
    pub flat_threshold: f64,
}

impl Default for RotosolveSettings {
    fn default() -> Self {
        Self {
            phi_policy: PhiPolicy::Current,
            reuse: false,
            flat_threshold: EXACT_FLAT_THRESHOLD,
        }
    }
}

/// Offset used for a single Rotosolve update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeOffset {
    /// Probe at `φ`, `φ ± π/2` (three evaluations).
    At(f64),
    /// The energy at the current angle is already known; probe only the two
    /// shifted angles.
    Known(f64),
}

/// Result of updating one gate.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateOutcome {
    pub generator: Generator,
    pub angle: f64,
    /// Extrapolated energy at the new parameters.
    pub energy: f64,
    pub fit: SinusoidFit,
    pub evaluations: u64,
    pub fallback: bool,
}

/// Minimizes gate `d`'s angle in closed form, leaving its generator alone.
pub fn rotosolve_update(
    circuit: &mut Circuit,
    d: usize,
    estimator: &mut Estimator<'_>,
    offset: ProbeOffset,
    flat_threshold: f64,
) -> Result<UpdateOutcome> {
    let start = estimator.evaluations();
    let current = circuit.angle(d)?;
    let (phi, at_phi) = match offset {
        ProbeOffset::Known(energy) => (current, energy),
        ProbeOffset::At(phi) => {
            circuit.set_angle(d, phi)?;
            (phi, estimator.energy(circuit)?)
        }
    };
    circuit.set_angle(d, phi + FRAC_PI_2)?;
    let plus = estimator.energy(circuit)?;
    circuit.set_angle(d, phi - FRAC_PI_2)?;
    let minus = estimator.energy(circuit)?;

    let probes = ProbeTriple::new(phi, at_phi, plus, minus);
    let fit = sinusoid::fit(&probes)?;
    let (angle, energy) = if fit.is_flat(flat_threshold) {
        (current, fit.value_at(current))
    } else {
        (sinusoid::optimal_angle(&probes)?, fit.extrapolated_minimum())
    };
    circuit.set_angle(d, angle)?;
    Ok(UpdateOutcome {
        generator: circuit.rotation(d)?.generator.clone(),
        angle: circuit.angle(d)?,
        energy,
        fit,
        evaluations: estimator.evaluations() - start,
        fallback: false,
    })
}

/// Coordinate minimization over all rotation angles, cycling `d = 0..D`
/// until the stopping criterion fires.
pub fn rotosolve(
    mut circuit: Circuit,
    objective: &Objective,
    settings: &RotosolveSettings,
    run: &RunSettings,
) -> Result<OptimizerTrace> {
    if circuit.num_rotations() == 0 {
        return Err(Error::Config("circuit has no rotation gates".into()));
    }
    let mut recorder = Recorder::new("rotosolve", run, &circuit)?;
    let mut estimator = Estimator::new(objective, run.estimator);
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let mut known: Option<f64> = None;
    loop {
        for d in 0..circuit.num_rotations() {
            let offset = match (settings.reuse, known) {
                (true, Some(energy)) => ProbeOffset::Known(energy),
                _ => match settings.phi_policy {
                    PhiPolicy::Current => ProbeOffset::At(circuit.angle(d)?),
                    PhiPolicy::Random => ProbeOffset::At(random_angle(&mut rng)),
                },
            };
            let outcome = rotosolve_update(
                &mut circuit,
                d,
                &mut estimator,
                offset,
                settings.flat_threshold,
            )?;
            known = Some(outcome.energy);
            if let Some(reason) =
                recorder.record(&estimator, &circuit, Some(d), outcome.energy, false)?
            {
                let evals = estimator.evaluations();
                return Ok(recorder.finish(circuit, evals, reason));
            }
        }
        if let Some(reason) = recorder.end_cycle() {
            let evals = estimator.evaluations();
            return Ok(recorder.finish(circuit, evals, reason));
        }
    }
}
