use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::states::{haar_random_state, trace_distance_pure};
use crate::circuit::{build_circuit15, build_layered_ansatz, Circuit};
use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, Objective};
use crate::optimize::{
    adam, rotoselect, rotosolve, spsa, AdamSettings, OptimizerTrace, RotoselectSettings,
    RotosolveSettings, RunSettings, SpsaSettings, StopReason, StoppingCriterion,
};
use crate::pauli::{Hamiltonian, SpectrumBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Rotosolve,
    Rotoselect,
    Adam,
    Spsa,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 4] = [
        OptimizerKind::Rotosolve,
        OptimizerKind::Rotoselect,
        OptimizerKind::Adam,
        OptimizerKind::Spsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Rotosolve => "rotosolve",
            OptimizerKind::Rotoselect => "rotoselect",
            OptimizerKind::Adam => "adam",
            OptimizerKind::Spsa => "spsa",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown optimizer {s:?}")))
    }
}

/// Hyperparameters for every optimizer; a run uses the entry for its kind.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub rotosolve: RotosolveSettings,
    pub rotoselect: RotoselectSettings,
    pub adam: AdamSettings,
    pub spsa: SpsaSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianSource {
    Heisenberg { coupling: f64, field: f64 },
    File { path: PathBuf },
}

impl HamiltonianSource {
    pub fn load(&self, num_qubits: usize) -> Result<Hamiltonian> {
        let h = match self {
            HamiltonianSource::Heisenberg { coupling, field } => {
                Hamiltonian::heisenberg(num_qubits, *coupling, *field)?
            }
            HamiltonianSource::File { path } => Hamiltonian::from_file(path)?,
        };
        if h.num_qubits() != num_qubits {
            return Err(Error::Config(format!(
                "Hamiltonian acts on {} qubits but the experiment uses {num_qubits}",
                h.num_qubits()
            )));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Task {
    Vqe { hamiltonian: HamiltonianSource },
    /// Minimize `−|⟨φ|ψ⟩|²` for Haar-random targets `φ`, one per trial,
    /// drawn from `target_seed`.
    StatePrep { target_seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Layered,
    Circuit15,
}

impl AnsatzKind {
    pub fn build(self, n: usize, layers: usize, seed: u64) -> Result<Circuit> {
        match self {
            AnsatzKind::Layered => build_layered_ansatz(n, layers, seed),
            AnsatzKind::Circuit15 => build_circuit15(n, layers, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    pub ansatz: AnsatzKind,
    pub num_qubits: usize,
    pub layers: usize,
    pub optimizers: Vec<OptimizerKind>,
    pub settings: OptimizerSettings,
    /// Shots per Hamiltonian term; 0 selects exact mode.
    pub shots: u64,
    pub trials: usize,
    pub stop: StoppingCriterion,
    /// Normalized distance used for evaluations-to-threshold.
    pub threshold: f64,
    /// Also end a trial once the threshold is reached.
    pub stop_at_threshold: bool,
    /// Record exact shadow energies (always on in sampled mode).
    pub record_exact: bool,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Exact-mode VQE on the `J = h = 1` Heisenberg ring with the layered
    /// ansatz and every optimizer.
    pub fn heisenberg(num_qubits: usize, layers: usize, stop: StoppingCriterion) -> Self {
        Self {
            task: Task::Vqe {
                hamiltonian: HamiltonianSource::Heisenberg {
                    coupling: 1.0,
                    field: 1.0,
                },
            },
            ansatz: AnsatzKind::Layered,
            num_qubits,
            layers,
            optimizers: OptimizerKind::ALL.to_vec(),
            settings: OptimizerSettings::default(),
            shots: 0,
            trials: 10,
            stop,
            threshold: 0.05,
            stop_at_threshold: false,
            record_exact: false,
            out: None,
            seed: 0,
        }
    }

    /// Circuit #15 state preparation against Haar-random targets.
    pub fn state_prep(num_qubits: usize, layers: usize, stop: StoppingCriterion) -> Self {
        Self {
            task: Task::StatePrep { target_seed: 0 },
            ansatz: AnsatzKind::Circuit15,
            optimizers: vec![OptimizerKind::Rotosolve, OptimizerKind::Rotoselect],
            ..Self::heisenberg(num_qubits, layers, stop)
        }
    }

    pub fn with_optimizers(mut self, optimizers: &[OptimizerKind]) -> Self {
        self.optimizers = optimizers.to_vec();
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.layers == 0 {
            return Err(Error::Config("layers must be at least 1".into()));
        }
        if self.optimizers.is_empty() {
            return Err(Error::Config("no optimizer selected".into()));
        }
        let min_qubits = match self.ansatz {
            AnsatzKind::Layered => 2,
            AnsatzKind::Circuit15 => 3,
        };
        if self.num_qubits < min_qubits {
            return Err(Error::Config(format!(
                "{:?} ansatz needs at least {min_qubits} qubits, got {}",
                self.ansatz, self.num_qubits
            )));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Config(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        self.stop.validate()
    }

    fn estimator_for(&self, trial: usize) -> EstimatorConfig {
        EstimatorConfig::from_shots(self.shots, derive_seed(self.seed, SHOT_STREAM, trial))
    }
}

const CIRCUIT_STREAM: u64 = 1;
const OPTIMIZER_STREAM: u64 = 2;
const SHOT_STREAM: u64 = 3;
const TARGET_STREAM: u64 = 4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one randomness stream of one trial. Every optimizer in an
/// experiment sees the same initial circuit and target for a given trial.
pub fn derive_seed(master: u64, stream: u64, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ trial as u64)
}

/// Haar-random target of a state-preparation trial.
pub fn state_prep_target(num_qubits: usize, target_seed: u64, trial: usize) -> Result<crate::qstate::StateVector> {
    haar_random_state(num_qubits, derive_seed(target_seed, TARGET_STREAM, trial))
}

/// Layer count of the scaling study: `3n²/2 + 2n` for even `n`,
/// `3(n²−1)/2 + 2n` for odd `n`.
pub fn scaling_depth(n: usize) -> usize {
    if n.is_multiple_of(2) {
        3 * n * n / 2 + 2 * n
    } else {
        3 * (n * n - 1) / 2 + 2 * n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub circuit_seed: u64,
    /// Lowest energy reported during the run.
    pub best_energy: f64,
    /// Lowest exact shadow energy, when recorded.
    pub best_exact_energy: Option<f64>,
    /// Exact energy of the final parameters.
    pub final_exact_energy: f64,
    pub evaluations: u64,
    pub cycles_completed: usize,
    pub stop_reason: StopReason,
    pub evaluations_to_threshold: Option<u64>,
    /// State preparation only: trace distance of the best circuit's output to
    /// the target.
    pub trace_distance: Option<f64>,
    pub best_generators: Vec<String>,
    pub best_angles: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std: f64,
    pub min: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        Some(Self { mean, std, min })
    }
}

/// Median with `None` counted as never reached (infinite). Returns `None`
/// when the median itself is infinite.
pub fn median_reached(values: &[Option<u64>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v: Vec<f64> = values
        .iter()
        .map(|x| x.map_or(f64::INFINITY, |e| e as f64))
        .collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let m = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    m.is_finite().then_some(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub best_energy: MeanStd,
    pub best_exact_energy: Option<MeanStd>,
    pub trace_distance: Option<MeanStd>,
    pub median_evaluations_to_threshold: Option<f64>,
    pub trials_reaching_threshold: usize,
}

/// All trials of one optimizer at one problem size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub optimizer: OptimizerKind,
    /// Exactly the configuration these trials ran with.
    pub config: ExperimentConfig,
    pub spectrum_bounds: Option<SpectrumBounds>,
    /// Energy at the configured normalized distance.
    pub threshold_energy: Option<f64>,
    pub trials: Vec<TrialSummary>,
    pub stats: RunStats,
    pub wall_clock_seconds: f64,
    #[serde(skip)]
    pub traces: Vec<OptimizerTrace>,
}

impl RunRecord {
    pub fn num_qubits(&self) -> usize {
        self.config.num_qubits
    }

    pub fn layers(&self) -> usize {
        self.config.layers
    }
}

fn run_optimizer(
    kind: OptimizerKind,
    circuit: Circuit,
    objective: &Objective,
    settings: &OptimizerSettings,
    run: &RunSettings,
) -> Result<OptimizerTrace> {
    match kind {
        OptimizerKind::Rotosolve => rotosolve(circuit, objective, &settings.rotosolve, run),
        OptimizerKind::Rotoselect => rotoselect(circuit, objective, &settings.rotoselect, run),
        OptimizerKind::Adam => adam(circuit, objective, &settings.adam, run),
        OptimizerKind::Spsa => spsa(circuit, objective, &settings.spsa, run),
    }
}

fn run_trial(
    config: &ExperimentConfig,
    kind: OptimizerKind,
    shared: Option<&Objective>,
    threshold_energy: Option<f64>,
    trial: usize,
) -> Result<(TrialSummary, OptimizerTrace)> {
    let circuit_seed = derive_seed(config.seed, CIRCUIT_STREAM, trial);
    let circuit = config
        .ansatz
        .build(config.num_qubits, config.layers, circuit_seed)?;
    let (objective, target) = match (&config.task, shared) {
        (Task::Vqe { .. }, Some(objective)) => (objective.clone(), None),
        (Task::StatePrep { target_seed }, _) => {
            let target = state_prep_target(config.num_qubits, *target_seed, trial)?;
            (Objective::Overlap(target.clone()), Some(target))
        }
        (Task::Vqe { .. }, None) => unreachable!("VQE objectives are built once per record"),
    };
    let estimator = config.estimator_for(trial);
    let stop = match (config.stop_at_threshold, threshold_energy) {
        (true, Some(target)) => StoppingCriterion::AnyOf(vec![
            StoppingCriterion::TargetEnergy(target),
            config.stop.clone(),
        ]),
        _ => config.stop.clone(),
    };
    let run = RunSettings {
        estimator,
        stop,
        seed: derive_seed(config.seed, OPTIMIZER_STREAM, trial),
        record_exact: config.record_exact || !estimator.is_exact(),
    };
    let trace = run_optimizer(kind, circuit, &objective, &config.settings, &run)?;
    let final_exact_energy = objective.exact(&trace.final_circuit.output_state()?)?;
    let trace_distance = target
        .map(|t| trace_distance_pure(&t, &trace.best_circuit.output_state()?))
        .transpose()?;
    let summary = TrialSummary {
        trial,
        circuit_seed,
        best_energy: trace.best_energy,
        best_exact_energy: trace.best_exact_energy,
        final_exact_energy,
        evaluations: trace.evaluations,
        cycles_completed: trace.cycles_completed,
        stop_reason: trace.stop_reason,
        evaluations_to_threshold: threshold_energy.and_then(|e| trace.evaluations_to(e)),
        trace_distance,
        best_generators: trace
            .best_circuit
            .rotations()
            .map(|r| r.generator.label().to_string())
            .collect(),
        best_angles: trace.best_angles(),
    };
    Ok((summary, trace))
}

/// Runs `config.trials` seeded trials of one optimizer in parallel.
pub fn run_record(experiment: &str, config: &ExperimentConfig, kind: OptimizerKind) -> Result<RunRecord> {
    config.validate()?;
    let started = Instant::now();
    let shared = match &config.task {
        Task::Vqe { hamiltonian } => Some(Objective::Hamiltonian(hamiltonian.load(config.num_qubits)?)),
        Task::StatePrep { .. } => None,
    };
    let spectrum_bounds = match &shared {
        Some(objective) => objective.spectrum_bounds(),
        None => Some(SpectrumBounds::new(-1.0, 0.0)?),
    };
    let threshold_energy = spectrum_bounds.map(|b| b.energy_at_fraction(config.threshold));
    let outcomes: Vec<Result<(TrialSummary, OptimizerTrace)>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, kind, shared.as_ref(), threshold_energy, t))
        .collect();
    let (trials, traces): (Vec<_>, Vec<_>) = outcomes.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();

    let best: Vec<f64> = trials.iter().map(|t| t.best_energy).collect();
    let best_exact: Vec<f64> = trials.iter().filter_map(|t| t.best_exact_energy).collect();
    let distances: Vec<f64> = trials.iter().filter_map(|t| t.trace_distance).collect();
    let reached: Vec<Option<u64>> = trials.iter().map(|t| t.evaluations_to_threshold).collect();
    let stats = RunStats {
        best_energy: MeanStd::of(&best).expect("at least one trial"),
        best_exact_energy: MeanStd::of(&best_exact),
        trace_distance: MeanStd::of(&distances),
        median_evaluations_to_threshold: median_reached(&reached),
        trials_reaching_threshold: reached.iter().filter(|r| r.is_some()).count(),
    };
    let mut snapshot = config.clone();
    snapshot.optimizers = vec![kind];
    Ok(RunRecord {
        experiment: experiment.to_string(),
        optimizer: kind,
        config: snapshot,
        spectrum_bounds,
        threshold_energy,
        trials,
        stats,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        traces,
    })
}

/// One record per configured optimizer.
pub fn run_vqe(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config
        .optimizers
        .iter()
        .map(|&kind| run_record("vqe", config, kind))
        .collect()
}

/// Best energy statistics per layer count and optimizer.
pub fn run_layer_sweep(config: &ExperimentConfig, layers: &[usize]) -> Result<Vec<RunRecord>> {
    if layers.is_empty() {
        return Err(Error::Config("layer list is empty".into()));
    }
    let mut records = Vec::new();
    for &l in layers {
        let cfg = ExperimentConfig {
            layers: l,
            ..config.clone()
        };
        for &kind in &config.optimizers {
            records.push(run_record("sweep-layers", &cfg, kind)?);
        }
    }
    Ok(records)
}

/// Energy against cumulative evaluations for every configured optimizer on
/// one problem, all trials starting from the same circuits.
pub fn run_comparison(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config
        .optimizers
        .iter()
        .map(|&kind| run_record("compare", config, kind))
        .collect()
}

/// Evaluations needed to reach the threshold as the qubit count grows, with
/// [`scaling_depth`] layers at each size. Trials stop at the threshold.
pub fn run_scaling(config: &ExperimentConfig, qubits: &[usize]) -> Result<Vec<RunRecord>> {
    if qubits.is_empty() {
        return Err(Error::Config("qubit list is empty".into()));
    }
    let mut records = Vec::new();
    for &n in qubits {
        let cfg = ExperimentConfig {
            num_qubits: n,
            layers: scaling_depth(n),
            stop_at_threshold: true,
            ..config.clone()
        };
        for &kind in &config.optimizers {
            records.push(run_record("scaling", &cfg, kind)?);
        }
    }
    Ok(records)
}

/// Trace distance to Haar-random targets per layer count and optimizer.
pub fn run_state_prep(config: &ExperimentConfig, layers: &[usize]) -> Result<Vec<RunRecord>> {
    if !matches!(config.task, Task::StatePrep { .. }) {
        return Err(Error::Config("state preparation needs a StatePrep task".into()));
    }
    if layers.is_empty() {
        return Err(Error::Config("layer list is empty".into()));
    }
    let mut records = Vec::new();
    for &l in layers {
        let cfg = ExperimentConfig {
            layers: l,
            ..config.clone()
        };
        for &kind in &config.optimizers {
            records.push(run_record("stateprep", &cfg, kind)?);
        }
    }
    Ok(records)
}
