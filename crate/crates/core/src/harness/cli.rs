use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::experiment::{
    run_comparison, run_layer_sweep, run_scaling, run_state_prep, run_vqe, AnsatzKind,
    ExperimentConfig, HamiltonianSource, OptimizerKind, RunRecord, Task,
};
use super::output::write_outputs;
use crate::error::{Error, Result};
use crate::optimize::{PhiPolicy, StoppingCriterion};

#[derive(Parser, Debug)]
#[command(name = "rotoselect", version, about = "Rotosolve/Rotoselect VQE experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize a Hamiltonian with one or more optimizers.
    Vqe(CommonArgs),
    /// Energy against evaluations for all four optimizers.
    Compare(CommonArgs),
    /// Evaluations to reach the threshold as the qubit count grows.
    Scaling {
        #[command(flatten)]
        common: CommonArgs,
        /// Qubit counts to run.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
        qubit_list: Vec<usize>,
    },
    /// Prepare Haar-random targets with circuit #15.
    Stateprep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7")]
        layer_list: Vec<usize>,
        /// Seed of the target states.
        #[arg(long, default_value_t = 0)]
        target_seed: u64,
    },
    /// Best energy per layer count for Rotosolve and Rotoselect.
    SweepLayers {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_value = "6,9,12,15")]
        layer_list: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizerArg {
    Rotosolve,
    Rotoselect,
    Adam,
    Spsa,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhiArg {
    Current,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnsatzArg {
    Layered,
    Circuit15,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, value_enum)]
    optimizer: Option<OptimizerArg>,
    /// Shots per Hamiltonian term; 0 means exact energies.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Cycle cap (steps for Adam and SPSA).
    #[arg(long)]
    cycles: Option<usize>,
    /// Stop after K2 consecutive cycles improving the best energy by less than DELTA.
    #[arg(long, num_args = 2, value_names = ["K2", "DELTA"])]
    no_improve: Option<Vec<String>>,
    /// Evaluation budget per trial.
    #[arg(long)]
    max_evals: Option<u64>,
    /// Normalized distance for evaluations-to-threshold.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reuse the previous energy in Rotosolve/Rotoselect updates.
    #[arg(long)]
    reuse: bool,
    #[arg(long, value_enum, default_value_t = PhiArg::Current)]
    phi: PhiArg,
    #[arg(long, value_enum)]
    ansatz: Option<AnsatzArg>,
    /// `heisenberg` or a path to a Pauli-word Hamiltonian file.
    #[arg(long, default_value = "heisenberg")]
    hamiltonian: String,
    #[arg(long = "J", default_value_t = 1.0)]
    coupling: f64,
    #[arg(long = "h", default_value_t = 1.0)]
    field: f64,
    /// Record exact energies alongside sampled ones.
    #[arg(long)]
    record_exact: bool,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Adam learning rate.
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    spsa_a: Option<f64>,
    #[arg(long)]
    spsa_c: Option<f64>,
    #[arg(long)]
    spsa_alpha: Option<f64>,
    #[arg(long)]
    spsa_gamma: Option<f64>,
    /// SPSA stability constant `A`.
    #[arg(long)]
    spsa_stability: Option<f64>,
}

struct Defaults {
    qubits: usize,
    layers: usize,
    optimizers: &'static [OptimizerKind],
    shots: u64,
    trials: usize,
    cycles: usize,
    max_evals: Option<u64>,
    threshold: f64,
    ansatz: AnsatzKind,
}

const ROTO: &[OptimizerKind] = &[OptimizerKind::Rotosolve, OptimizerKind::Rotoselect];

impl CommonArgs {
    fn into_config(self, d: Defaults, task: Task) -> Result<ExperimentConfig> {
        let num_qubits = self.qubits.unwrap_or(d.qubits);
        let optimizers = match self.optimizer {
            None => d.optimizers.to_vec(),
            Some(OptimizerArg::All) => OptimizerKind::ALL.to_vec(),
            Some(OptimizerArg::Rotosolve) => vec![OptimizerKind::Rotosolve],
            Some(OptimizerArg::Rotoselect) => vec![OptimizerKind::Rotoselect],
            Some(OptimizerArg::Adam) => vec![OptimizerKind::Adam],
            Some(OptimizerArg::Spsa) => vec![OptimizerKind::Spsa],
        };
        let mut criteria = vec![StoppingCriterion::MaxCycles(self.cycles.unwrap_or(d.cycles))];
        if let Some(limit) = self.max_evals.or(d.max_evals) {
            criteria.push(StoppingCriterion::MaxEvaluations(limit));
        }
        if let Some(pair) = &self.no_improve {
            let cycles: usize = pair[0]
                .parse()
                .map_err(|_| Error::Config(format!("--no-improve K2 must be an integer, got {}", pair[0])))?;
            let min_decrease: f64 = pair[1]
                .parse()
                .map_err(|_| Error::Config(format!("--no-improve DELTA must be a number, got {}", pair[1])))?;
            criteria.push(StoppingCriterion::NoImprovement {
                cycles,
                min_decrease,
            });
        }
        let mut config = ExperimentConfig {
            task,
            ansatz: match self.ansatz {
                None => d.ansatz,
                Some(AnsatzArg::Layered) => AnsatzKind::Layered,
                Some(AnsatzArg::Circuit15) => AnsatzKind::Circuit15,
            },
            num_qubits,
            layers: self.layers.unwrap_or(d.layers),
            optimizers,
            settings: Default::default(),
            shots: self.shots.unwrap_or(d.shots),
            trials: self.trials.unwrap_or(d.trials),
            stop: if criteria.len() == 1 {
                criteria.remove(0)
            } else {
                StoppingCriterion::AnyOf(criteria)
            },
            threshold: self.threshold.unwrap_or(d.threshold),
            stop_at_threshold: false,
            record_exact: self.record_exact,
            out: Some(self.out),
            seed: self.seed,
        };
        let s = &mut config.settings;
        s.rotosolve.reuse = self.reuse;
        s.rotoselect.reuse = self.reuse;
        s.rotosolve.phi_policy = match self.phi {
            PhiArg::Current => PhiPolicy::Current,
            PhiArg::Random => PhiPolicy::Random,
        };
        if let Some(lr) = self.lr {
            s.adam.learning_rate = lr;
        }
        let spsa = &mut s.spsa;
        for (flag, slot) in [
            (self.spsa_a, &mut spsa.a),
            (self.spsa_c, &mut spsa.c),
            (self.spsa_alpha, &mut spsa.alpha),
            (self.spsa_gamma, &mut spsa.gamma),
            (self.spsa_stability, &mut spsa.stability),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        config.validate()?;
        Ok(config)
    }

    fn vqe_task(&self) -> Task {
        let hamiltonian = if self.hamiltonian == "heisenberg" {
            HamiltonianSource::Heisenberg {
                coupling: self.coupling,
                field: self.field,
            }
        } else {
            HamiltonianSource::File {
                path: PathBuf::from(&self.hamiltonian),
            }
        };
        Task::Vqe { hamiltonian }
    }
}

fn dispatch(command: Command) -> Result<(&'static str, ExperimentConfig, Vec<RunRecord>)> {
    let base = Defaults {
        qubits: 5,
        layers: 6,
        optimizers: &[OptimizerKind::Rotoselect],
        shots: 0,
        trials: 10,
        cycles: 200,
        max_evals: None,
        threshold: 0.05,
        ansatz: AnsatzKind::Layered,
    };
    match command {
        Command::Vqe(args) => {
            let task = args.vqe_task();
            let config = args.into_config(base, task)?;
            let records = run_vqe(&config)?;
            Ok(("vqe", config, records))
        }
        Command::Compare(args) => {
            let task = args.vqe_task();
            let d = Defaults {
                layers: 30,
                optimizers: &OptimizerKind::ALL,
                trials: 5,
                cycles: 10_000,
                max_evals: Some(20_000),
                ..base
            };
            let config = args.into_config(d, task)?;
            let records = run_comparison(&config)?;
            Ok(("compare", config, records))
        }
        Command::Scaling { common, qubit_list } => {
            let task = common.vqe_task();
            let d = Defaults {
                optimizers: &OptimizerKind::ALL,
                shots: 1000,
                trials: 5,
                cycles: 10_000,
                max_evals: Some(1_000_000),
                threshold: 0.02,
                ..base
            };
            let config = common.into_config(d, task)?;
            let records = run_scaling(&config, &qubit_list)?;
            Ok(("scaling", config, records))
        }
        Command::Stateprep {
            common,
            layer_list,
            target_seed,
        } => {
            let d = Defaults {
                qubits: 4,
                optimizers: ROTO,
                cycles: 50,
                ansatz: AnsatzKind::Circuit15,
                ..base
            };
            let layers = common.layers.map_or(layer_list, |l| vec![l]);
            let config = common.into_config(d, Task::StatePrep { target_seed })?;
            let records = run_state_prep(&config, &layers)?;
            Ok(("stateprep", config, records))
        }
        Command::SweepLayers { common, layer_list } => {
            let task = common.vqe_task();
            let d = Defaults {
                optimizers: ROTO,
                ..base
            };
            let layers = common.layers.map_or(layer_list, |l| vec![l]);
            let config = common.into_config(d, task)?;
            let records = run_layer_sweep(&config, &layers)?;
            Ok(("sweep-layers", config, records))
        }
    }
}

fn report(records: &[RunRecord]) {
    println!(
        "{:<11} {:>2} {:>3} {:>14} {:>10} {:>12} {:>8}",
        "optimizer", "n", "L", "mean best", "std", "median evals", "reached"
    );
    for r in records {
        let median = r
            .stats
            .median_evaluations_to_threshold
            .map_or("-".to_string(), |m| format!("{m}"));
        println!(
            "{:<11} {:>2} {:>3} {:>14.6} {:>10.6} {:>12} {:>5}/{}",
            r.optimizer.name(),
            r.num_qubits(),
            r.layers(),
            r.stats.best_energy.mean,
            r.stats.best_energy.std,
            median,
            r.stats.trials_reaching_threshold,
            r.trials.len()
        );
        if let Some(td) = r.stats.trace_distance {
            println!("{:<11} trace distance {:.6} ± {:.6}", "", td.mean, td.std);
        }
    }
}

/// Parses `argv` (including the program name), runs the experiment and
/// writes its outputs. Returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = dispatch(cli.command).and_then(|(experiment, config, records)| {
        let root = config.out.clone().unwrap_or_else(|| PathBuf::from("runs"));
        let dir = write_outputs(&root, experiment, config.seed, &records)?;
        Ok((records, dir))
    });
    match outcome {
        Ok((records, dir)) => {
            report(&records);
            println!("wrote {}", dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_optimizer_is_rejected() {
        assert_eq!(cli_main(["rotoselect", "vqe", "--optimizer", "newton"]), 2);
        assert_eq!(cli_main(["rotoselect", "bogus"]), 2);
    }

    #[test]
    fn shots_zero_is_exact_and_flags_reach_config() {
        let cli = Cli::try_parse_from([
            "rotoselect", "vqe", "--shots", "0", "--qubits", "3", "--layers", "2", "--optimizer",
            "all", "--no-improve", "3", "1e-6", "--lr", "0.1", "--spsa-a", "0.3", "--reuse",
            "--J", "0.5", "--h", "0",
        ])
        .unwrap();
        let Command::Vqe(args) = cli.command else {
            panic!("expected vqe")
        };
        let task = args.vqe_task();
        assert_eq!(
            task,
            Task::Vqe {
                hamiltonian: HamiltonianSource::Heisenberg {
                    coupling: 0.5,
                    field: 0.0
                }
            }
        );
        let base = Defaults {
            qubits: 5,
            layers: 6,
            optimizers: ROTO,
            shots: 1000,
            trials: 10,
            cycles: 200,
            max_evals: None,
            threshold: 0.05,
            ansatz: AnsatzKind::Layered,
        };
        let config = args.into_config(base, task).unwrap();
        assert_eq!(config.shots, 0);
        assert_eq!(config.optimizers.len(), 4);
        assert!(config.settings.rotoselect.reuse);
        assert_eq!(config.settings.adam.learning_rate, 0.1);
        assert_eq!(config.settings.spsa.a, 0.3);
        assert_eq!(
            config.stop,
            StoppingCriterion::AnyOf(vec![
                StoppingCriterion::MaxCycles(200),
                StoppingCriterion::NoImprovement {
                    cycles: 3,
                    min_decrease: 1e-6
                }
            ])
        );
    }

    #[test]
    fn config_errors_exit_nonzero() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(
            cli_main(["rotoselect", "vqe", "--trials", "0", "--out", out]),
            1
        );
        assert_eq!(
            cli_main(["rotoselect", "vqe", "--hamiltonian", "/nonexistent/h.txt", "--out", out]),
            1
        );
    }
}
