use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::rotosolve::UpdateOutcome;
use super::{OptimizerTrace, Recorder, RunSettings};
use crate::circuit::{Circuit, Generator};
use crate::error::{Error, Result};
use crate::estimator::{Estimator, Objective};
use crate::sinusoid::{self, ProbeTriple, EXACT_FLAT_THRESHOLD};

/// Below this `|cos θ_d|` the reused energy cannot pin down the probe at
/// zero and the update measures it directly.
pub const SINGULAR_COS_THRESHOLD: f64 = 1e-6;

/// Candidates whose extrapolated minima differ by less than this are tied.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotoselectSettings {
    /// Reuse the previous update's energy: 6 evaluations per update instead
    /// of 7, except in the singular configuration.
    pub reuse: bool,
    pub flat_threshold: f64,
}

impl Default for RotoselectSettings {
    fn default() -> Self {
        Self {
            reuse: false,
            flat_threshold: EXACT_FLAT_THRESHOLD,
        }
    }
}

struct Candidate {
    generator: Generator,
    angle: f64,
    energy: f64,
    fit: sinusoid::SinusoidFit,
}

fn probe_pair(
    circuit: &mut Circuit,
    d: usize,
    generator: &Generator,
    estimator: &mut Estimator<'_>,
) -> Result<(f64, f64)> {
    circuit.set_gate(d, generator.clone(), FRAC_PI_2)?;
    let plus = estimator.energy(circuit)?;
    circuit.set_gate(d, generator.clone(), -FRAC_PI_2)?;
    let minus = estimator.energy(circuit)?;
    Ok((plus, minus))
}

/// Chooses the generator of gate `d` from `{X, Y, Z}` together with its
/// optimal angle.
///
/// All probes use offset `φ = 0`, where the gate is the identity for every
/// generator, so the centre probe is shared: 1 + 3·2 = 7 evaluations. With
/// `known_energy` (the energy at the current parameters) the centre probe is
/// recovered from the current generator's shifted pair, for 6 evaluations.
///
/// Ties between candidates go to the current generator, then X, Y, Z.
pub fn rotoselect_update(
    circuit: &mut Circuit,
    d: usize,
    estimator: &mut Estimator<'_>,
    known_energy: Option<f64>,
    flat_threshold: f64,
) -> Result<UpdateOutcome> {
    let start = estimator.evaluations();
    let rotation = circuit.rotation(d)?;
    let current = rotation.generator.clone();
    let current_angle = rotation.angle;
    if !current.is_canonical() {
        return Err(Error::UnsupportedGenerator(format!(
            "rotoselect needs an X, Y or Z generator at rotation {d}, found {}",
            current.label()
        )));
    }

    let mut fallback = false;
    let (center, current_pair) = match known_energy {
        Some(energy) => {
            let pair = probe_pair(circuit, d, &current, estimator)?;
            let recovered = sinusoid::recover_center_probe(
                0.0,
                pair.0,
                pair.1,
                current_angle,
                energy,
                SINGULAR_COS_THRESHOLD,
            );
            let center = match recovered {
                Some(center) => center,
                None => {
                    fallback = true;
                    circuit.set_gate(d, current.clone(), 0.0)?;
                    estimator.energy(circuit)?
                }
            };
            (center, pair)
        }
        None => {
            circuit.set_gate(d, current.clone(), 0.0)?;
            let center = estimator.energy(circuit)?;
            (center, probe_pair(circuit, d, &current, estimator)?)
        }
    };

    let order = std::iter::once(current.clone())
        .chain(Generator::CANONICAL.into_iter().filter(|g| *g != current));
    let mut best: Option<Candidate> = None;
    for generator in order {
        let (plus, minus) = if generator == current {
            current_pair
        } else {
            probe_pair(circuit, d, &generator, estimator)?
        };
        let probes = ProbeTriple::new(0.0, center, plus, minus);
        let fit = sinusoid::fit(&probes)?;
        let (angle, energy) = if fit.is_flat(flat_threshold) {
            if generator == current {
                (current_angle, fit.value_at(current_angle))
            } else {
                (0.0, fit.value_at(0.0))
            }
        } else {
            (sinusoid::optimal_angle(&probes)?, fit.extrapolated_minimum())
        };
        let candidate = Candidate {
            generator,
            angle,
            energy,
            fit,
        };
        match &best {
            Some(b) if candidate.energy >= b.energy - TIE_TOLERANCE => {}
            _ => best = Some(candidate),
        }
    }
    let best = best.expect("three candidates were evaluated");
    circuit.set_gate(d, best.generator.clone(), best.angle)?;
    Ok(UpdateOutcome {
        generator: best.generator,
        angle: circuit.angle(d)?,
        energy: best.energy,
        fit: best.fit,
        evaluations: estimator.evaluations() - start,
        fallback,
    })
}

/// Rotosolve extended with per-gate generator selection.
pub fn rotoselect(
    mut circuit: Circuit,
    objective: &Objective,
    settings: &RotoselectSettings,
    run: &RunSettings,
) -> Result<OptimizerTrace> {
    if circuit.num_rotations() == 0 {
        return Err(Error::Config("circuit has no rotation gates".into()));
    }
    let mut recorder = Recorder::new("rotoselect", run, &circuit)?;
    let mut estimator = Estimator::new(objective, run.estimator);
    let mut known: Option<f64> = None;
    loop {
        for d in 0..circuit.num_rotations() {
            let reuse = if settings.reuse { known } else { None };
            let outcome =
                rotoselect_update(&mut circuit, d, &mut estimator, reuse, settings.flat_threshold)?;
            known = Some(outcome.energy);
            if let Some(reason) = recorder.record(
                &estimator,
                &circuit,
                Some(d),
                outcome.energy,
                outcome.fallback,
            )? {
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
