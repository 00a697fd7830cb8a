//! Coordinate minimization for parameterized quantum circuits.
//!
//! The crate bundles everything needed to run variational eigensolver
//! experiments at desk scale:
//!
//! - [`qstate`]: dense statevector and gate kernels (qubit 0 is the least
//!   significant bit of a basis index).
//! - [`pauli`]: Pauli words, weighted Hamiltonians, the Heisenberg ring
//!   builder, a text format for externally sourced Hamiltonians and a dense
//!   diagonalization oracle.
//! - [`circuit`]: gate lists with mutable per-gate generators and angles,
//!   plus the layered CZ-ladder ansatz and circuit #15.
//! - [`estimator`]: exact and shot-sampled energy estimation, with the
//!   evaluation counter every optimizer is audited against.
//! - [`sinusoid`]: the three-probe sinusoid fit, closed-form minimizing angle
//!   and extrapolated minimum.
//! - [`optimize`]: Rotosolve, Rotoselect, Adam over parameter-shift
//!   gradients and SPSA.
//! - [`harness`]: experiment drivers, trace persistence and the CLI.
//!
//! ```
//! use rotoselect::prelude::*;
//!
//! let h = Hamiltonian::heisenberg(2, 1.0, 0.0).unwrap();
//! let circuit = build_layered_ansatz(2, 3, 11).unwrap();
//! let objective = Objective::Hamiltonian(h);
//! let run = RunSettings::exact(StoppingCriterion::MaxCycles(20), 3);
//! let trace = rotoselect(circuit, &objective, &RotoselectSettings::default(), &run).unwrap();
//! assert!(trace.best_energy < -2.5);
//! ```

pub mod circuit;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod optimize;
pub mod pauli;
pub mod qstate;
pub mod sinusoid;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::circuit::{
        build_circuit15, build_layered_ansatz, canonical_angle, Circuit, ConjugatedGenerator,
        FixedGate, Gate, Generator, Rotation,
    };
    pub use crate::error::{Error, Result};
    pub use crate::estimator::{EstimatorConfig, EvalCounter, Estimator, Objective};
    pub use crate::optimize::{
        adam, parameter_shift_gradient, rotoselect, rotosolve, spsa, AdamSettings,
        OptimizerTrace, PhiPolicy, RotoselectSettings, RotosolveSettings, RunSettings,
        SpsaSettings, StoppingCriterion,
    };
    pub use crate::pauli::{Hamiltonian, Pauli, PauliString, SpectrumBounds};
    pub use crate::qstate::{StateVector, UnitVector3};
    pub use crate::sinusoid::{ProbeTriple, SinusoidFit};
}
