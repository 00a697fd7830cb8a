//! Acceptance criteria, each at its pinned tolerance. Prints one PASS/FAIL
//! line per criterion and exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use rotoselect::circuit::{build_layered_ansatz, Circuit, Generator};
use rotoselect::estimator::{EstimatorConfig, EvalCounter, Estimator, Objective};
use rotoselect::harness::{
    run_comparison, run_layer_sweep, run_state_prep, ExperimentConfig, OptimizerKind, RunRecord,
};
use rotoselect::optimize::*;
use rotoselect::pauli::Hamiltonian;
use rotoselect::sinusoid::{self, ProbeTriple};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn exact_at(circ: &mut Circuit, d: usize, theta: f64, obj: &Objective) -> f64 {
    circ.set_angle(d, theta).unwrap();
    obj.exact(&circ.output_state().unwrap()).unwrap()
}

fn probes_at(circ: &mut Circuit, d: usize, phi: f64, obj: &Objective) -> ProbeTriple {
    ProbeTriple::new(
        phi,
        exact_at(circ, d, phi, obj),
        exact_at(circ, d, phi + FRAC_PI_2, obj),
        exact_at(circ, d, phi - FRAC_PI_2, obj),
    )
}

/// Largest deviation between the three-probe fit and the exact curve at
/// `angles` random angles.
fn sinusoid_error(circ: &mut Circuit, d: usize, obj: &Objective, r: &mut rand_chacha::ChaCha8Rng, angles: usize) -> f64 {
    let original = circ.angle(d).unwrap();
    let phi = random_angle(r);
    let fit = sinusoid::fit(&probes_at(circ, d, phi, obj)).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..angles {
        let theta = random_angle(r);
        worst = worst.max((fit.value_at(theta) - exact_at(circ, d, theta, obj)).abs());
    }
    circ.set_angle(d, original).unwrap();
    worst
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut r = rng(1001);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let h = random_hamiltonian(&mut r, n, 2 * n + 2);
        let obj = Objective::Hamiltonian(h);
        let gates = r.random_range(1..=3 * n + 4);
        let mut circ = random_circuit(&mut r, n, gates, false);
        let d = r.random_range(0..circ.num_rotations());
        worst = worst.max(sinusoid_error(&mut circ, d, &obj, &mut r, 20));
    }
    let elapsed = started.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(30),
        format!("200 cases, max fit error {worst:.2e}, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    let mut r = rng(1002);
    let grid = 100_000;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..50 {
        let n = r.random_range(1..=3);
        let obj = Objective::Hamiltonian(random_hamiltonian(&mut r, n, 2 * n + 1));
        let gates = r.random_range(1..=2 * n + 2);
        let mut circ = random_circuit(&mut r, n, gates, false);
        let d = r.random_range(0..circ.num_rotations());
        let phi = random_angle(&mut r);
        let star = sinusoid::optimal_angle(&probes_at(&mut circ, d, phi, &obj)).unwrap();
        let at_star = exact_at(&mut circ, d, star, &obj);
        for k in 0..grid {
            let theta = -PI + 2.0 * PI * k as f64 / grid as f64;
            // positive gap: the grid point beats θ*
            worst_gap = worst_gap.max(at_star - exact_at(&mut circ, d, theta, &obj));
        }
    }
    let elapsed = started.elapsed();
    outcome(
        worst_gap <= 1e-9 && elapsed < Duration::from_secs(60),
        format!(
            "50 cases × 10^5 grid, worst E(θ*) − E(grid) = {worst_gap:.2e}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let obj = Objective::Hamiltonian(Hamiltonian::heisenberg(3, 1.0, 1.0).unwrap());
    let circ = build_layered_ansatz(3, 3, 1003).unwrap();
    let d = circ.num_rotations() as u64;
    let two = RunSettings::exact(StoppingCriterion::MaxCycles(2), 0);
    let mut failures = Vec::new();
    let mut check = |label: &str, got: u64, want: u64| {
        if got != want {
            failures.push(format!("{label}: {got} != {want}"));
        }
    };

    let cycle_evals = |t: &OptimizerTrace, cycle: usize| -> u64 {
        let end = t.records.iter().rfind(|r| r.cycle <= cycle).unwrap().cumulative_evals;
        let start = t
            .records
            .iter()
            .rfind(|r| r.cycle < cycle)
            .map_or(0, |r| r.cumulative_evals);
        end - start
    };

    let t = rotosolve(circ.clone(), &obj, &RotosolveSettings::default(), &two).unwrap();
    check("rotosolve cycle 1", cycle_evals(&t, 0), 3 * d);
    check("rotosolve cycle 2", cycle_evals(&t, 1), 3 * d);
    let reuse = RotosolveSettings {
        reuse: true,
        ..Default::default()
    };
    let t = rotosolve(circ.clone(), &obj, &reuse, &two).unwrap();
    check("rotosolve reuse cycle 1", cycle_evals(&t, 0), 3 + 2 * (d - 1));
    check("rotosolve reuse cycle 2", cycle_evals(&t, 1), 2 * d);

    let t = rotoselect(circ.clone(), &obj, &RotoselectSettings::default(), &two).unwrap();
    check("rotoselect cycle 1", cycle_evals(&t, 0), 7 * d);
    check("rotoselect cycle 2", cycle_evals(&t, 1), 7 * d);
    let reuse = RotoselectSettings {
        reuse: true,
        ..Default::default()
    };
    let t = rotoselect(circ, &obj, &reuse, &two).unwrap();
    let fallbacks = t.records.iter().filter(|r| r.fallback).count() as u64;
    check("rotoselect reuse fallbacks", fallbacks, 0);
    check("rotoselect reuse cycle 1", cycle_evals(&t, 0), 7 + 6 * (d - 1));
    check("rotoselect reuse cycle 2", cycle_evals(&t, 1), 6 * d);

    let two_qubit = Objective::Hamiltonian(Hamiltonian::heisenberg(2, 1.0, 0.0).unwrap());
    let four_gates = build_layered_ansatz(2, 2, 1004).unwrap();
    check("rotation count", four_gates.num_rotations() as u64, 4);
    let t = rotoselect(four_gates, &two_qubit, &RotoselectSettings::default(), &two).unwrap();
    check("two rotoselect cycles on 4 gates", t.evaluations, 56);

    let pass = failures.is_empty();
    let detail = if pass {
        format!("3D/2D/7D/6D with D={d}, 56 for 2 cycles × 4 gates")
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn criterion_4() -> Outcome {
    let obj = Objective::Hamiltonian(Hamiltonian::heisenberg(4, 1.0, 1.0).unwrap());
    let mut increases = 0;
    let mut updates = 0;
    for k in 0..20u64 {
        let circ = build_layered_ansatz(4, 6, 4000 + k).unwrap();
        let initial = obj.exact(&circ.output_state().unwrap()).unwrap();
        let run = RunSettings {
            record_exact: true,
            ..RunSettings::exact(StoppingCriterion::MaxCycles(30), k)
        };
        let traces = [
            rotosolve(circ.clone(), &obj, &RotosolveSettings::default(), &run).unwrap(),
            rotoselect(circ, &obj, &RotoselectSettings::default(), &run).unwrap(),
        ];
        for t in &traces {
            let mut previous = initial;
            for r in &t.records {
                let e = r.exact_energy.unwrap();
                if e > previous + 1e-9 {
                    increases += 1;
                }
                previous = e;
                updates += 1;
            }
        }
    }
    outcome(
        increases == 0,
        format!("{increases} increases over {updates} exact updates (20 runs × 2 optimizers)"),
    )
}

fn mean_std(records: &[RunRecord], kind: OptimizerKind, layers: usize) -> (f64, f64) {
    let r = records
        .iter()
        .find(|r| r.optimizer == kind && r.layers() == layers)
        .unwrap();
    (r.stats.best_energy.mean, r.stats.best_energy.std)
}

fn criterion_5() -> Outcome {
    let cfg = ExperimentConfig::heisenberg(5, 3, StoppingCriterion::MaxCycles(200))
        .with_optimizers(&[OptimizerKind::Rotosolve, OptimizerKind::Rotoselect])
        .with_trials(10)
        .with_seed(5000);
    let records = run_layer_sweep(&cfg, &[3, 6]).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for layers in [3, 6] {
        let (solve, solve_std) = mean_std(&records, OptimizerKind::Rotosolve, layers);
        let (select, select_std) = mean_std(&records, OptimizerKind::Rotoselect, layers);
        pass &= select <= solve;
        if layers == 3 {
            pass &= select_std < solve_std;
        }
        parts.push(format!(
            "L={layers}: rotosolve {solve:.4}±{solve_std:.4}, rotoselect {select:.4}±{select_std:.4}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let h = Hamiltonian::heisenberg(4, 1.0, 1.0).unwrap();
    let eig = hermitian_eigenvalues(&hamiltonian_matrix(&h));
    let (e_min, e_max) = (eig[0], eig[eig.len() - 1]);
    let target = e_min + 0.02 * (e_max - e_min);
    let obj = Objective::Hamiltonian(h);
    let mut successes = 0;
    let mut cycles = Vec::new();
    for k in 0..10u64 {
        let circ = build_layered_ansatz(4, 12, 6000 + k).unwrap();
        let stop = StoppingCriterion::AnyOf(vec![
            StoppingCriterion::TargetEnergy(target),
            StoppingCriterion::MaxCycles(500),
        ]);
        let t = rotoselect(circ, &obj, &RotoselectSettings::default(), &RunSettings::exact(stop, k)).unwrap();
        if t.best_energy <= target {
            successes += 1;
            cycles.push(t.records.last().unwrap().cycle + 1);
        }
    }
    outcome(
        successes >= 8,
        format!("{successes}/10 reached 2% of [{e_min:.4}, {e_max:.4}], cycles used {cycles:?}"),
    )
}

fn criterion_7() -> Outcome {
    let mut cfg = ExperimentConfig::heisenberg(5, 30, StoppingCriterion::MaxEvaluations(200_000))
        .with_trials(5)
        .with_seed(3000);
    cfg.threshold = 0.05;
    cfg.stop_at_threshold = true;
    let records = run_comparison(&cfg).unwrap();
    let median = |kind: OptimizerKind| {
        records
            .iter()
            .find(|r| r.optimizer == kind)
            .unwrap()
            .stats
            .median_evaluations_to_threshold
            .unwrap_or(f64::INFINITY)
    };
    let [solve, select, adam, spsa] = OptimizerKind::ALL.map(median);
    let pass = solve < adam && solve < spsa && select < adam && select < spsa;
    let s = &cfg.settings.spsa;
    outcome(
        pass,
        format!(
            "median evals to 5%: rotosolve {solve}, rotoselect {select}, adam {adam} (lr {}), spsa {spsa} (a={}, c={}, α={}, γ={}, A={})",
            cfg.settings.adam.learning_rate, s.a, s.c, s.alpha, s.gamma, s.stability
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut cfg = ExperimentConfig::state_prep(4, 1, StoppingCriterion::MaxCycles(50))
        .with_trials(10)
        .with_seed(8000);
    cfg.task = rotoselect::harness::Task::StatePrep { target_seed: 8001 };
    let records = run_state_prep(&cfg, &[1, 7]).unwrap();
    let td = |kind: OptimizerKind, layers: usize| {
        records
            .iter()
            .find(|r| r.optimizer == kind && r.layers() == layers)
            .unwrap()
            .stats
            .trace_distance
            .unwrap()
            .mean
    };
    let solve7 = td(OptimizerKind::Rotosolve, 7);
    let select7 = td(OptimizerKind::Rotoselect, 7);
    let select1 = td(OptimizerKind::Rotoselect, 1);
    let solve1 = td(OptimizerKind::Rotosolve, 1);
    outcome(
        select7 < solve7 && select7 < select1 && select7 < 0.15,
        format!(
            "mean trace distance L=1: rotosolve {solve1:.4}, rotoselect {select1:.4}; L=7: rotosolve {solve7:.4}, rotoselect {select7:.4}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(1009);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = r.random_range(1..=4);
        let h = random_hamiltonian(&mut r, n, 2 * n + 1);
        let obj = Objective::Hamiltonian(h.clone());
        let gates = r.random_range(1..=3 * n + 3);
        let circ = random_circuit(&mut r, n, gates, false);
        let mut est = Estimator::new(&obj, EstimatorConfig::Exact);
        let grad = parameter_shift_gradient(&circ, &mut est).unwrap();
        for (d, g) in grad.iter().enumerate() {
            let theta = circ.angle(d).unwrap();
            let mut c = circ.clone();
            c.set_angle(d, theta + 1e-5).unwrap();
            let plus = dense_energy(&c, &h);
            c.set_angle(d, theta - 1e-5).unwrap();
            let minus = dense_energy(&c, &h);
            worst = worst.max((g - (plus - minus) / 2e-5).abs());
        }
    }
    outcome(worst < 1e-6, format!("50 cases, max |shift − FD| = {worst:.2e}"))
}

fn criterion_10() -> Outcome {
    let mut r = rng(1010);
    let shots = 1_000_000u64;
    let mut worst_sigmas: f64 = 0.0;
    for case in 0..50u64 {
        let n = r.random_range(1..=4);
        let h = random_hamiltonian(&mut r, n, n + 3);
        let circ = random_circuit(&mut r, n, 3 * n + 2, false);
        let state = circ.output_state().unwrap();
        let exact = h.expectation(&state).unwrap();
        let variance: f64 = h
            .terms()
            .iter()
            .filter(|(_, w)| !w.is_identity())
            .map(|(w, word)| {
                let e = word.expectation(&state).unwrap();
                w * w * (1.0 - e * e) / shots as f64
            })
            .sum();
        let config = EstimatorConfig::sampled(shots, 10_000 + case).unwrap();
        let sampled = rotoselect::estimator::energy(&circ, &h, config, &mut EvalCounter::new()).unwrap();
        let sigma = variance.sqrt().max(1e-15);
        worst_sigmas = worst_sigmas.max((sampled - exact).abs() / sigma);
    }
    let statistics = worst_sigmas <= 3.0;

    let h = Hamiltonian::heisenberg(3, 1.0, 1.0).unwrap();
    let eig = hermitian_eigenvalues(&hamiltonian_matrix(&h));
    let (e_min, e_max) = (eig[0], eig[eig.len() - 1]);
    let obj = Objective::Hamiltonian(h);
    let mut successes = 0;
    for k in 0..10u64 {
        let circ = build_layered_ansatz(3, 6, 10_100 + k).unwrap();
        let run = RunSettings::sampled(StoppingCriterion::MaxCycles(200), 1000, 10_200 + k).unwrap();
        let t = rotosolve(circ, &obj, &RotosolveSettings::default(), &run).unwrap();
        let final_exact = obj.exact(&t.final_circuit.output_state().unwrap()).unwrap();
        if (final_exact - e_min) / (e_max - e_min) <= 0.1 {
            successes += 1;
        }
    }
    outcome(
        statistics && successes >= 7,
        format!(
            "10^6 shots: worst deviation {worst_sigmas:.2}σ over 50 cases; 1000 shots: {successes}/10 Rotosolve runs within 10%"
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut r = rng(1011);
    let mut worst_square: f64 = 0.0;
    let mut worst_fit: f64 = 0.0;
    for i in 0..100 {
        let n = r.random_range(2..=4);
        let q = r.random_range(0..n - 1);
        let g = if i % 2 == 0 {
            Generator::Axis(random_axis(&mut r))
        } else {
            {
            let k = r.random_range(1..=2);
            random_conjugated(&mut r, k)
        }
        };
        let m = generator_matrix(&g);
        worst_square = worst_square.max(m.mul(&m).max_diff(&Dense::identity(m.dim)));
        let lib = Dense::from_vec(m.dim, g.matrix());
        worst_square = worst_square.max(lib.mul(&lib).max_diff(&Dense::identity(m.dim)));

        let obj = Objective::Hamiltonian(random_hamiltonian(&mut r, n, 2 * n + 1));
        let mut circ = random_circuit(&mut r, n, 6, false);
        let d = circ.push_rotation(q, g, random_angle(&mut r)).unwrap();
        for _ in 0..3 {
            circ.push_rotation(r.random_range(0..n), random_canonical(&mut r), random_angle(&mut r)).unwrap();
        }
        worst_fit = worst_fit.max(sinusoid_error(&mut circ, d, &obj, &mut r, 20));
    }
    outcome(
        worst_square < 1e-9 && worst_fit < 1e-10,
        format!("100 generators, max |H² − I| = {worst_square:.2e}, max fit error {worst_fit:.2e}"),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("sinusoidal form", criterion_1),
        ("closed-form minimizer vs grid", criterion_2),
        ("evaluation accounting", criterion_3),
        ("exact-mode monotonicity", criterion_4),
        ("rotoselect vs rotosolve at fixed depth", criterion_5),
        ("near-ground-state convergence", criterion_6),
        ("optimizer comparison", criterion_7),
        ("state preparation", criterion_8),
        ("parameter-shift gradients", criterion_9),
        ("sampled estimator", criterion_10),
        ("generalized generators", criterion_11),
    ];
    let filter: Option<usize> = std::env::args()
        .skip(1)
        .find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if filter.is_some_and(|f| f != number) {
            continue;
        }
        let started = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {number:>2} {status} {name}: {} [{:.1}s]",
            o.detail,
            started.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
