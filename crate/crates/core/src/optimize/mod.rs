//! Optimizers over circuit angles (and, for Rotoselect, generators).
//!
//! All optimizers share [`RunSettings`], report through [`OptimizerTrace`]
//! and spend evaluations only through [`Estimator::energy`], so the
//! `cumulative_evals` column of a trace is always the estimator's counter.

mod gradient;
mod rotoselect;
mod rotosolve;
mod spsa;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Generator};
use crate::error::{Error, Result};
use crate::estimator::{Estimator, EstimatorConfig};

pub use gradient::{adam, parameter_shift_gradient, AdamSettings};
pub use rotoselect::{rotoselect, rotoselect_update, RotoselectSettings, SINGULAR_COS_THRESHOLD};
pub use rotosolve::{rotosolve, rotosolve_update, PhiPolicy, ProbeOffset, RotosolveSettings, UpdateOutcome};
pub use spsa::{spsa, SpsaSettings};

/// When to end a run. Cycle-based criteria are checked at cycle boundaries,
/// the others after every update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingCriterion {
    /// Stop after exactly this many cycles.
    MaxCycles(usize),
    /// Stop once the best energy has dropped by less than `min_decrease` in
    /// each of `cycles` consecutive cycles.
    NoImprovement { cycles: usize, min_decrease: f64 },
    /// Stop at the first update that brings the counter to `limit` or more.
    MaxEvaluations(u64),
    /// Stop at the first update whose energy is at or below the target. The
    /// exact shadow energy is used when it is recorded.
    TargetEnergy(f64),
    /// Stop when any member fires.
    AnyOf(Vec<StoppingCriterion>),
}

impl StoppingCriterion {
    pub fn validate(&self) -> Result<()> {
        match self {
            StoppingCriterion::MaxCycles(0) => {
                Err(Error::Config("MaxCycles needs at least one cycle".into()))
            }
            StoppingCriterion::NoImprovement { cycles: 0, .. } => {
                Err(Error::Config("NoImprovement needs at least one cycle".into()))
            }
            StoppingCriterion::NoImprovement { min_decrease, .. } if !(*min_decrease > 0.0) => Err(
                Error::Config("NoImprovement needs a positive minimum decrease".into()),
            ),
            StoppingCriterion::MaxEvaluations(0) => {
                Err(Error::Config("MaxEvaluations needs a positive limit".into()))
            }
            StoppingCriterion::TargetEnergy(t) if !t.is_finite() => {
                Err(Error::Config("target energy must be finite".into()))
            }
            StoppingCriterion::AnyOf(list) if list.is_empty() => {
                Err(Error::Config("AnyOf needs at least one criterion".into()))
            }
            StoppingCriterion::AnyOf(list) => list.iter().try_for_each(Self::validate),
            _ => Ok(()),
        }
    }

    fn has_cycle_bound(&self) -> bool {
        match self {
            StoppingCriterion::MaxCycles(_)
            | StoppingCriterion::NoImprovement { .. }
            | StoppingCriterion::MaxEvaluations(_) => true,
            StoppingCriterion::TargetEnergy(_) => false,
            StoppingCriterion::AnyOf(list) => list.iter().any(Self::has_cycle_bound),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxCycles,
    NoImprovement,
    MaxEvaluations,
    TargetReached,
}

/// Settings every optimizer run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub estimator: EstimatorConfig,
    pub stop: StoppingCriterion,
    /// Seeds the optimizer's own randomness (random φ, SPSA perturbations).
    pub seed: u64,
    /// Record the noise-free energy of the parameters after every update.
    /// Never counted as an evaluation.
    pub record_exact: bool,
}

impl RunSettings {
    pub fn exact(stop: StoppingCriterion, seed: u64) -> Self {
        Self {
            estimator: EstimatorConfig::Exact,
            stop,
            seed,
            record_exact: false,
        }
    }

    pub fn sampled(stop: StoppingCriterion, shots_per_term: u64, seed: u64) -> Result<Self> {
        Ok(Self {
            estimator: EstimatorConfig::sampled(shots_per_term, seed)?,
            stop,
            seed,
            record_exact: true,
        })
    }

    fn validate(&self) -> Result<()> {
        self.stop.validate()?;
        if !self.stop.has_cycle_bound() {
            return Err(Error::Config(
                "stopping criterion has no cycle or evaluation bound".into(),
            ));
        }
        Ok(())
    }
}

/// One optimizer update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Zero-based cycle (or step, for gradient methods).
    pub cycle: usize,
    /// Rotation index updated, `None` for whole-vector steps.
    pub gate_index: Option<usize>,
    pub cumulative_evals: u64,
    /// Energy the optimizer reports after the update.
    pub energy: f64,
    pub exact_energy: Option<f64>,
    /// Generator label of the updated gate.
    pub generator: Option<String>,
    /// Rotoselect reuse fell back to a direct probe.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub optimizer: String,
    pub records: Vec<StepRecord>,
    /// Running minimum of reported energies.
    pub best_energy: f64,
    /// Running minimum of exact shadow energies, when recorded.
    pub best_exact_energy: Option<f64>,
    /// Circuit at which `best_energy` was reported.
    pub best_circuit: Circuit,
    pub final_circuit: Circuit,
    /// Generator labels before the first update.
    pub initial_generators: Vec<String>,
    pub evaluations: u64,
    pub cycles_completed: usize,
    pub stop_reason: StopReason,
}

impl OptimizerTrace {
    pub fn best_angles(&self) -> Vec<f64> {
        self.best_circuit.angles()
    }

    pub fn best_generators(&self) -> Vec<Generator> {
        self.best_circuit.generators()
    }

    /// Cumulative evaluations at the first record whose energy (exact shadow
    /// when available) is at or below `target`.
    pub fn evaluations_to(&self, target: f64) -> Option<u64> {
        self.records
            .iter()
            .find(|r| r.exact_energy.unwrap_or(r.energy) <= target)
            .map(|r| r.cumulative_evals)
    }

    /// Per cycle, the number of updates that changed their gate's generator.
    pub fn generator_changes_per_cycle(&self) -> Vec<usize> {
        let mut last: Vec<Option<&str>> =
            self.initial_generators.iter().map(|g| Some(g.as_str())).collect();
        let mut out: Vec<usize> = Vec::new();
        for r in &self.records {
            let (Some(d), Some(g)) = (r.gate_index, r.generator.as_deref()) else {
                continue;
            };
            if out.len() <= r.cycle {
                out.resize(r.cycle + 1, 0);
            }
            if last[d] != Some(g) {
                out[r.cycle] += 1;
            }
            last[d] = Some(g);
        }
        out
    }
}

/// Tracks the best point seen and evaluates the stopping rule.
pub(crate) struct Recorder {
    optimizer: &'static str,
    stop: StoppingCriterion,
    record_exact: bool,
    records: Vec<StepRecord>,
    best_energy: f64,
    best_exact: Option<f64>,
    best_circuit: Circuit,
    initial_generators: Vec<String>,
    best_at_cycle_start: f64,
    no_improvement_streaks: Vec<usize>,
    cycles_completed: usize,
}

impl Recorder {
    pub(crate) fn new(optimizer: &'static str, run: &RunSettings, circuit: &Circuit) -> Result<Self> {
        run.validate()?;
        Ok(Self {
            optimizer,
            stop: run.stop.clone(),
            record_exact: run.record_exact,
            records: Vec::new(),
            best_energy: f64::INFINITY,
            best_exact: None,
            best_circuit: circuit.clone(),
            initial_generators: circuit
                .rotations()
                .map(|r| r.generator.label().to_string())
                .collect(),
            best_at_cycle_start: f64::INFINITY,
            no_improvement_streaks: Vec::new(),
            cycles_completed: 0,
        })
    }

    /// Appends a record and reports whether a per-update criterion fired.
    pub(crate) fn record(
        &mut self,
        estimator: &Estimator<'_>,
        circuit: &Circuit,
        gate_index: Option<usize>,
        energy: f64,
        fallback: bool,
    ) -> Result<Option<StopReason>> {
        let exact_energy = if self.record_exact {
            Some(estimator.exact(circuit)?)
        } else {
            None
        };
        if energy < self.best_energy {
            self.best_energy = energy;
            self.best_circuit = circuit.clone();
        }
        if let Some(e) = exact_energy {
            self.best_exact = Some(self.best_exact.map_or(e, |b: f64| b.min(e)));
        }
        let generator = gate_index
            .map(|d| circuit.rotation(d).map(|r| r.generator.label().to_string()))
            .transpose()?;
        let cumulative_evals = estimator.evaluations();
        self.records.push(StepRecord {
            cycle: self.cycles_completed,
            gate_index,
            cumulative_evals,
            energy,
            exact_energy,
            generator,
            fallback,
        });
        let observed = exact_energy.unwrap_or(energy);
        Ok(per_update_stop(&self.stop, cumulative_evals, observed))
    }

    /// Closes a cycle and reports whether a cycle criterion fired.
    pub(crate) fn end_cycle(&mut self) -> Option<StopReason> {
        self.cycles_completed += 1;
        let decrease = if self.best_at_cycle_start.is_finite() {
            self.best_at_cycle_start - self.best_energy
        } else {
            f64::INFINITY
        };
        self.best_at_cycle_start = self.best_energy;
        let mut slot = 0;
        cycle_stop(
            &self.stop,
            self.cycles_completed,
            decrease,
            &mut self.no_improvement_streaks,
            &mut slot,
        )
    }

    pub(crate) fn finish(self, circuit: Circuit, evaluations: u64, stop_reason: StopReason) -> OptimizerTrace {
        OptimizerTrace {
            optimizer: self.optimizer.to_string(),
            records: self.records,
            best_energy: self.best_energy,
            best_exact_energy: self.best_exact,
            best_circuit: self.best_circuit,
            final_circuit: circuit,
            initial_generators: self.initial_generators,
            evaluations,
            cycles_completed: self.cycles_completed,
            stop_reason,
        }
    }
}

fn per_update_stop(stop: &StoppingCriterion, evaluations: u64, energy: f64) -> Option<StopReason> {
    match stop {
        StoppingCriterion::MaxEvaluations(limit) if evaluations >= *limit => {
            Some(StopReason::MaxEvaluations)
        }
        StoppingCriterion::TargetEnergy(target) if energy <= *target => {
            Some(StopReason::TargetReached)
        }
        StoppingCriterion::AnyOf(list) => list
            .iter()
            .find_map(|s| per_update_stop(s, evaluations, energy)),
        _ => None,
    }
}

/// Each `NoImprovement` node owns one streak counter, addressed in
/// depth-first order through `slot`.
fn cycle_stop(
    stop: &StoppingCriterion,
    cycles: usize,
    decrease: f64,
    streaks: &mut Vec<usize>,
    slot: &mut usize,
) -> Option<StopReason> {
    match stop {
        StoppingCriterion::MaxCycles(k) if cycles >= *k => Some(StopReason::MaxCycles),
        StoppingCriterion::NoImprovement {
            cycles: k,
            min_decrease,
        } => {
            if streaks.len() <= *slot {
                streaks.resize(*slot + 1, 0);
            }
            let streak = &mut streaks[*slot];
            *slot += 1;
            if decrease < *min_decrease {
                *streak += 1;
            } else {
                *streak = 0;
            }
            (*streak >= *k).then_some(StopReason::NoImprovement)
        }
        StoppingCriterion::AnyOf(list) => {
            let mut fired = None;
            for s in list {
                // visit every member so all streak counters advance
                let r = cycle_stop(s, cycles, decrease, streaks, slot);
                fired = fired.or(r);
            }
            fired
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_validation() {
        assert!(StoppingCriterion::MaxCycles(0).validate().is_err());
        assert!(StoppingCriterion::NoImprovement {
            cycles: 2,
            min_decrease: 0.0
        }
        .validate()
        .is_err());
        assert!(StoppingCriterion::AnyOf(vec![]).validate().is_err());
        assert!(StoppingCriterion::AnyOf(vec![
            StoppingCriterion::TargetEnergy(-1.0),
            StoppingCriterion::MaxCycles(3)
        ])
        .validate()
        .is_ok());
        let unbounded = RunSettings::exact(StoppingCriterion::TargetEnergy(-1.0), 0);
        assert!(unbounded.validate().is_err());
    }

    #[test]
    fn no_improvement_streaks() {
        let stop = StoppingCriterion::NoImprovement {
            cycles: 2,
            min_decrease: 0.1,
        };
        let mut streaks = Vec::new();
        let mut go = |d: f64, c: usize| {
            let mut slot = 0;
            cycle_stop(&stop, c, d, &mut streaks, &mut slot)
        };
        assert_eq!(go(1.0, 1), None);
        assert_eq!(go(0.05, 2), None);
        assert_eq!(go(0.5, 3), None);
        assert_eq!(go(0.0, 4), None);
        assert_eq!(go(0.01, 5), Some(StopReason::NoImprovement));
    }

    #[test]
    fn per_update_rules() {
        let stop = StoppingCriterion::AnyOf(vec![
            StoppingCriterion::MaxEvaluations(10),
            StoppingCriterion::TargetEnergy(-2.0),
        ]);
        assert_eq!(per_update_stop(&stop, 9, -1.0), None);
        assert_eq!(per_update_stop(&stop, 10, -1.0), Some(StopReason::MaxEvaluations));
        assert_eq!(per_update_stop(&stop, 3, -2.0), Some(StopReason::TargetReached));
    }
}
