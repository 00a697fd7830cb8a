//! Energy estimation.
//!
//! Every optimizer observes the objective only through [`Estimator::energy`],
//! which bumps the evaluation counter by one per full estimate regardless of
//! how many Hamiltonian terms are involved.
//!
//! Shot noise is simulated per term: a non-identity Pauli word `P` has
//! outcomes `±1` with `Pr(+1) = (1 + ⟨P⟩)/2`, so the number of `+1` outcomes
//! in `s` shots is binomial. Each term draws from its own ChaCha stream keyed
//! by `(seed, evaluation index, term index)`, which keeps sampled runs
//! bit-reproducible and independent of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, SpectrumBounds, DENSE_MAX_QUBITS};
use crate::qstate::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EstimatorConfig {
    Exact,
    Sampled { shots_per_term: u64, seed: u64 },
}

impl EstimatorConfig {
    pub fn sampled(shots_per_term: u64, seed: u64) -> Result<Self> {
        if shots_per_term == 0 {
            return Err(Error::Config("sampled mode needs at least one shot per term".into()));
        }
        Ok(Self::Sampled {
            shots_per_term,
            seed,
        })
    }

    /// `0` shots selects exact mode.
    pub fn from_shots(shots_per_term: u64, seed: u64) -> Self {
        if shots_per_term == 0 {
            Self::Exact
        } else {
            Self::Sampled {
                shots_per_term,
                seed,
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact)
    }
}

/// Number of full energy evaluations performed so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Records one evaluation and returns its zero-based index.
    pub fn tick(&mut self) -> u64 {
        let index = self.count;
        self.count += 1;
        index
    }
}

/// Operator whose expectation is minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Objective {
    /// `M = Σ w_i P_i`.
    Hamiltonian(Hamiltonian),
    /// `M = −|φ⟩⟨φ|`, i.e. minus the fidelity with a target state.
    Overlap(StateVector),
}

impl Objective {
    pub fn num_qubits(&self) -> usize {
        match self {
            Objective::Hamiltonian(h) => h.num_qubits(),
            Objective::Overlap(t) => t.num_qubits(),
        }
    }

    pub fn exact(&self, state: &StateVector) -> Result<f64> {
        match self {
            Objective::Hamiltonian(h) => h.expectation(state),
            Objective::Overlap(target) => Ok(-target.fidelity(state)?),
        }
    }

    pub fn sampled(&self, state: &StateVector, shots: u64, seed: u64, eval_index: u64) -> Result<f64> {
        match self {
            Objective::Hamiltonian(h) => sampled_hamiltonian(h, state, shots, seed, eval_index),
            Objective::Overlap(target) => {
                let fidelity = target.fidelity(state)?.clamp(0.0, 1.0);
                let mut rng = term_rng(seed, eval_index, 0);
                let hits = draw_binomial(shots, fidelity, &mut rng)?;
                Ok(-(hits as f64) / shots as f64)
            }
        }
    }

    /// Extreme eigenvalues of `M` when they can be computed densely.
    pub fn spectrum_bounds(&self) -> Option<SpectrumBounds> {
        match self {
            Objective::Hamiltonian(h) if h.num_qubits() <= DENSE_MAX_QUBITS => {
                h.exact_spectrum_bounds().ok()
            }
            Objective::Hamiltonian(_) => None,
            Objective::Overlap(_) => Some(SpectrumBounds {
                e_min: -1.0,
                e_max: 0.0,
            }),
        }
    }
}

fn draw_binomial(shots: u64, p: f64, rng: &mut ChaCha8Rng) -> Result<u64> {
    Binomial::new(shots, p)
        .map(|b| b.sample(rng))
        .map_err(|e| Error::Validation(format!("binomial({shots}, {p}): {e}")))
}

/// Independent stream per `(seed, evaluation, term)`.
pub(crate) fn term_rng(seed: u64, eval_index: u64, term_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&eval_index.to_le_bytes());
    key[16..24].copy_from_slice(b"energy\0\0");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(term_index);
    rng
}

fn check_sizes(circuit: &Circuit, objective: &Objective) -> Result<()> {
    if circuit.num_qubits() != objective.num_qubits() {
        return Err(Error::Size(format!(
            "{}-qubit circuit against a {}-qubit objective",
            circuit.num_qubits(),
            objective.num_qubits()
        )));
    }
    Ok(())
}

/// Counted energy estimates for one objective.
#[derive(Debug, Clone)]
pub struct Estimator<'a> {
    objective: &'a Objective,
    config: EstimatorConfig,
    counter: EvalCounter,
}

impl<'a> Estimator<'a> {
    pub fn new(objective: &'a Objective, config: EstimatorConfig) -> Self {
        Self {
            objective,
            config,
            counter: EvalCounter::new(),
        }
    }

    pub fn objective(&self) -> &'a Objective {
        self.objective
    }

    pub fn config(&self) -> EstimatorConfig {
        self.config
    }

    pub fn evaluations(&self) -> u64 {
        self.counter.count()
    }

    pub fn counter(&self) -> EvalCounter {
        self.counter
    }

    /// One counted estimate of `⟨M⟩` for the circuit applied to `|0…0⟩`.
    pub fn energy(&mut self, circuit: &Circuit) -> Result<f64> {
        check_sizes(circuit, self.objective)?;
        let state = circuit.output_state()?;
        let eval_index = self.counter.tick();
        match self.config {
            EstimatorConfig::Exact => self.objective.exact(&state),
            EstimatorConfig::Sampled {
                shots_per_term,
                seed,
            } => self.objective.sampled(&state, shots_per_term, seed, eval_index),
        }
    }

    /// Noise-free energy that does not count as an evaluation. Used for
    /// bookkeeping only; optimizers never branch on it.
    pub fn exact(&self, circuit: &Circuit) -> Result<f64> {
        check_sizes(circuit, self.objective)?;
        self.objective.exact(&circuit.output_state()?)
    }
}

/// `⟨M⟩` for a Hamiltonian, counted on `counter`.
pub fn energy(
    circuit: &Circuit,
    hamiltonian: &Hamiltonian,
    config: EstimatorConfig,
    counter: &mut EvalCounter,
) -> Result<f64> {
    if circuit.num_qubits() != hamiltonian.num_qubits() {
        return Err(Error::Size(format!(
            "{}-qubit circuit against a {}-qubit Hamiltonian",
            circuit.num_qubits(),
            hamiltonian.num_qubits()
        )));
    }
    let state = circuit.output_state()?;
    let eval_index = counter.tick();
    match config {
        EstimatorConfig::Exact => hamiltonian.expectation(&state),
        EstimatorConfig::Sampled {
            shots_per_term,
            seed,
        } => sampled_hamiltonian(hamiltonian, &state, shots_per_term, seed, eval_index),
    }
}

fn sampled_hamiltonian(
    hamiltonian: &Hamiltonian,
    state: &StateVector,
    shots: u64,
    seed: u64,
    eval_index: u64,
) -> Result<f64> {
    let mut total = 0.0;
    for (term_index, (w, word)) in hamiltonian.terms().iter().enumerate() {
        if word.is_identity() {
            total += w;
            continue;
        }
        if *w == 0.0 {
            continue;
        }
        let p_plus = (0.5 * (1.0 + word.expectation(state)?)).clamp(0.0, 1.0);
        let mut rng = term_rng(seed, eval_index, term_index as u64);
        let plus = draw_binomial(shots, p_plus, &mut rng)?;
        total += w * (2.0 * plus as f64 - shots as f64) / shots as f64;
    }
    Ok(total)
}

/// `−|⟨φ|ψ⟩|²` (exact) or minus the hit rate of `shots` Bernoulli draws.
pub fn state_overlap_energy(
    circuit: &Circuit,
    target: &StateVector,
    config: EstimatorConfig,
    counter: &mut EvalCounter,
) -> Result<f64> {
    if circuit.num_qubits() != target.num_qubits() {
        return Err(Error::Size(format!(
            "{}-qubit circuit against a {}-qubit target",
            circuit.num_qubits(),
            target.num_qubits()
        )));
    }
    let fidelity = target.fidelity(&circuit.output_state()?)?;
    let eval_index = counter.tick();
    match config {
        EstimatorConfig::Exact => Ok(-fidelity),
        EstimatorConfig::Sampled {
            shots_per_term,
            seed,
        } => {
            let mut rng = term_rng(seed, eval_index, 0);
            let hits = draw_binomial(shots_per_term, fidelity.clamp(0.0, 1.0), &mut rng)?;
            Ok(-(hits as f64) / shots_per_term as f64)
        }
    }
}
