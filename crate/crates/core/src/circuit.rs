//! Circuit representation and ansatz builders.
//!
//! A [`Circuit`] is an ordered gate list. Rotation gates are the optimizable
//! coordinates and are addressed by their rank `d = 0..D` among rotations,
//! independent of how many fixed gates sit between them.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qstate::{StateVector, UnitVector3, DEFAULT_MAX_QUBITS};

/// Wraps an angle into `(-π, π]`; `-π` maps to `π`.
pub fn canonical_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let wrapped = theta.rem_euclid(two_pi);
    if wrapped > PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}

/// Unitary `2^k × 2^k` conjugation `V P V†` of a Pauli word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatedGenerator {
    word: PauliString,
    conjugator: Vec<Complex64>,
    matrix: Vec<Complex64>,
}

impl ConjugatedGenerator {
    pub const TOLERANCE: f64 = 1e-9;

    /// `conjugator` is row-major with local bit `j` acting on the `j`-th
    /// qubit of the block.
    pub fn new(word: PauliString, conjugator: Vec<Complex64>) -> Result<Self> {
        let k = word.len();
        let dim = 1usize << k;
        if conjugator.len() != dim * dim {
            return Err(Error::Size(format!(
                "conjugator for a {k}-qubit word needs {} entries, got {}",
                dim * dim,
                conjugator.len()
            )));
        }
        let v = &conjugator;
        let vdag = dagger(v, dim);
        let vvdag = matmul(v, &vdag, dim);
        if max_deviation_from_identity(&vvdag, dim) > Self::TOLERANCE {
            return Err(Error::Validation("conjugator is not unitary".into()));
        }
        let mut p = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let (row, phase) = word.apply_to_basis(col);
            p[row * dim + col] = phase;
        }
        let matrix = matmul(&matmul(v, &p, dim), &vdag, dim);
        let square = matmul(&matrix, &matrix, dim);
        if max_deviation_from_identity(&square, dim) > Self::TOLERANCE {
            return Err(Error::Validation("conjugated generator does not square to I".into()));
        }
        Ok(Self {
            word,
            conjugator,
            matrix,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &PauliString {
        &self.word
    }

    pub fn conjugator(&self) -> &[Complex64] {
        &self.conjugator
    }

    /// Row-major `V P V†`.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }
}

fn dagger(m: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[c * dim + r] = m[r * dim + c].conj();
        }
    }
    out
}

fn matmul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let x = a[r * dim + k];
            for c in 0..dim {
                out[r * dim + c] += x * b[k * dim + c];
            }
        }
    }
    out
}

fn max_deviation_from_identity(m: &[Complex64], dim: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((m[r * dim + c] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Hermitian, unitary generator `H` of a rotation `exp(-i θ/2 H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    X,
    Y,
    Z,
    /// `c_x X + c_y Y + c_z Z` for a unit vector `c`.
    Axis(UnitVector3),
    /// `V P V†` on a contiguous block of qubits.
    Conjugated(ConjugatedGenerator),
}

impl Generator {
    /// Candidates Rotoselect searches over, in tie-break order.
    pub const CANONICAL: [Generator; 3] = [Generator::X, Generator::Y, Generator::Z];

    pub fn num_qubits(&self) -> usize {
        match self {
            Generator::Conjugated(g) => g.num_qubits(),
            _ => 1,
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, Generator::X | Generator::Y | Generator::Z)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Generator::X => "X",
            Generator::Y => "Y",
            Generator::Z => "Z",
            Generator::Axis(_) => "AXIS",
            Generator::Conjugated(_) => "CONJ",
        }
    }

    /// Dense row-major matrix of `H` on its own qubits.
    pub fn matrix(&self) -> Vec<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            Generator::X => vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
            Generator::Y => vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
            Generator::Z => vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
            Generator::Axis(a) => {
                let [x, y, z] = a.components();
                vec![c(z, 0.), c(x, -y), c(x, y), c(-z, 0.)]
            }
            Generator::Conjugated(g) => g.matrix().to_vec(),
        }
    }

    fn from_label(label: &str) -> Option<Self> {
        match label {
            "X" => Some(Generator::X),
            "Y" => Some(Generator::Y),
            "Z" => Some(Generator::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedGate {
    Cz(usize, usize),
    Cnot { control: usize, target: usize },
}

impl FixedGate {
    pub fn qubits(&self) -> (usize, usize) {
        match *self {
            FixedGate::Cz(a, b) => (a, b),
            FixedGate::Cnot { control, target } => (control, target),
        }
    }
}

/// Parameterized rotation. Multi-qubit generators act on
/// `qubit..qubit + generator.num_qubits()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub qubit: usize,
    pub generator: Generator,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Fixed(FixedGate),
    Rotation(Rotation),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    /// Position in `gates` of the d-th rotation.
    rotation_slots: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Size(format!(
                "qubit count {num_qubits} outside 1..={DEFAULT_MAX_QUBITS}"
            )));
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
            rotation_slots: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of optimizable coordinates `D`.
    pub fn num_rotations(&self) -> usize {
        self.rotation_slots.len()
    }

    pub fn num_fixed(&self) -> usize {
        self.gates.len() - self.rotation_slots.len()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::Index(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn check_generator_fits(&self, qubit: usize, generator: &Generator) -> Result<()> {
        self.check_qubit(qubit)?;
        if qubit + generator.num_qubits() > self.num_qubits {
            return Err(Error::Index(format!(
                "{}-qubit generator at qubit {qubit} overruns {} qubits",
                generator.num_qubits(),
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Appends a rotation and returns its coordinate index.
    pub fn push_rotation(&mut self, qubit: usize, generator: Generator, angle: f64) -> Result<usize> {
        self.check_generator_fits(qubit, &generator)?;
        self.rotation_slots.push(self.gates.len());
        self.gates.push(Gate::Rotation(Rotation {
            qubit,
            generator,
            angle: canonical_angle(angle),
        }));
        Ok(self.rotation_slots.len() - 1)
    }

    pub fn push_fixed(&mut self, gate: FixedGate) -> Result<()> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Index(format!("two-qubit gate on repeated qubit {a}")));
        }
        self.gates.push(Gate::Fixed(gate));
        Ok(())
    }

    pub fn push_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.push_fixed(FixedGate::Cz(a, b))
    }

    pub fn push_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push_fixed(FixedGate::Cnot { control, target })
    }

    fn slot(&self, d: usize) -> Result<usize> {
        self.rotation_slots.get(d).copied().ok_or_else(|| {
            Error::Index(format!(
                "rotation index {d} out of range for {} rotations",
                self.rotation_slots.len()
            ))
        })
    }

    pub fn rotation(&self, d: usize) -> Result<&Rotation> {
        match &self.gates[self.slot(d)?] {
            Gate::Rotation(r) => Ok(r),
            Gate::Fixed(_) => unreachable!("rotation slot points at a fixed gate"),
        }
    }

    fn rotation_mut(&mut self, d: usize) -> Result<&mut Rotation> {
        let slot = self.slot(d)?;
        match &mut self.gates[slot] {
            Gate::Rotation(r) => Ok(r),
            Gate::Fixed(_) => unreachable!("rotation slot points at a fixed gate"),
        }
    }

    /// Replaces the generator and angle of rotation `d`; the angle is stored
    /// canonicalized to `(-π, π]`.
    pub fn set_gate(&mut self, d: usize, generator: Generator, angle: f64) -> Result<()> {
        let qubit = self.rotation(d)?.qubit;
        self.check_generator_fits(qubit, &generator)?;
        let r = self.rotation_mut(d)?;
        r.generator = generator;
        r.angle = canonical_angle(angle);
        Ok(())
    }

    pub fn set_angle(&mut self, d: usize, angle: f64) -> Result<()> {
        self.rotation_mut(d)?.angle = canonical_angle(angle);
        Ok(())
    }

    pub fn angle(&self, d: usize) -> Result<f64> {
        Ok(self.rotation(d)?.angle)
    }

    pub fn angles(&self) -> Vec<f64> {
        self.rotations().map(|r| r.angle).collect()
    }

    pub fn set_angles(&mut self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.num_rotations() {
            return Err(Error::Size(format!(
                "{} angles for {} rotations",
                angles.len(),
                self.num_rotations()
            )));
        }
        for (d, &a) in angles.iter().enumerate() {
            self.set_angle(d, a)?;
        }
        Ok(())
    }

    pub fn rotations(&self) -> impl Iterator<Item = &Rotation> + '_ {
        self.gates.iter().filter_map(|g| match g {
            Gate::Rotation(r) => Some(r),
            Gate::Fixed(_) => None,
        })
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.rotations().map(|r| r.generator.clone()).collect()
    }

    /// Applies the gates in order to `initial`.
    pub fn evaluate(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.num_qubits() != self.num_qubits {
            return Err(Error::Size(format!(
                "{}-qubit circuit on a {}-qubit state",
                self.num_qubits,
                initial.num_qubits()
            )));
        }
        let mut state = initial.clone();
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Output state for the `|0…0⟩` input.
    pub fn output_state(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.num_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        for gate in &self.gates {
            match gate {
                Gate::Fixed(f) => state.apply_fixed(f)?,
                Gate::Rotation(r) => state.apply_rotation(r.qubit, &r.generator, r.angle)?,
            }
        }
        Ok(())
    }

    /// One gate per line: `ROT q<k> <X|Y|Z> <angle>`, `CZ q<i> q<j>` or
    /// `CNOT q<control> q<target>`. Only canonical generators can be dumped.
    pub fn to_dump(&self) -> Result<String> {
        let mut out = String::new();
        for gate in &self.gates {
            match gate {
                Gate::Fixed(FixedGate::Cz(a, b)) => writeln!(out, "CZ q{a} q{b}"),
                Gate::Fixed(FixedGate::Cnot { control, target }) => {
                    writeln!(out, "CNOT q{control} q{target}")
                }
                Gate::Rotation(r) => {
                    if !r.generator.is_canonical() {
                        return Err(Error::UnsupportedGenerator(format!(
                            "{} generator has no dump representation",
                            r.generator.label()
                        )));
                    }
                    writeln!(out, "ROT q{} {} {:?}", r.qubit, r.generator.label(), r.angle)
                }
            }
            .expect("writing to a String cannot fail");
        }
        Ok(out)
    }

    pub fn from_dump(num_qubits: usize, text: &str) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits)?;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let qubit = |s: &str| -> Result<usize> {
                s.strip_prefix('q')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| err(format!("malformed qubit {s:?}")))
            };
            match fields.as_slice() {
                ["ROT", q, g, angle] => {
                    let generator = Generator::from_label(g)
                        .ok_or_else(|| err(format!("unknown generator {g:?}")))?;
                    let angle: f64 = angle
                        .parse()
                        .map_err(|_| err(format!("malformed angle {angle:?}")))?;
                    circuit.push_rotation(qubit(q)?, generator, angle)?;
                }
                ["CZ", a, b] => circuit.push_cz(qubit(a)?, qubit(b)?)?,
                ["CNOT", c, t] => circuit.push_cnot(qubit(c)?, qubit(t)?)?,
                _ => return Err(err(format!("unrecognized gate line {raw:?}"))),
            }
        }
        Ok(circuit)
    }
}

/// Uniform draw from `(-π, π]`.
pub(crate) fn random_angle<R: Rng>(rng: &mut R) -> f64 {
    PI - 2.0 * PI * rng.random::<f64>()
}

fn random_canonical_generator<R: Rng>(rng: &mut R) -> Generator {
    Generator::CANONICAL[rng.random_range(0..3)].clone()
}

/// Layers of one randomly initialized rotation per qubit followed by a CZ
/// ladder `(0,1), (1,2), …, (n-2,n-1)`.
pub fn build_layered_ansatz(n: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if n < 2 || layers == 0 {
        return Err(Error::Size(format!(
            "layered ansatz needs n ≥ 2 and layers ≥ 1, got n={n}, layers={layers}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n)?;
    for _ in 0..layers {
        for q in 0..n {
            let generator = random_canonical_generator(&mut rng);
            let angle = random_angle(&mut rng);
            circuit.push_rotation(q, generator, angle)?;
        }
        for q in 0..n - 1 {
            circuit.push_cz(q, q + 1)?;
        }
    }
    Ok(circuit)
}

/// Circuit #15 of the expressibility benchmark, generalized to `n` qubits.
///
/// Each layer is an `R_Y` column, a CNOT ring with controls visited
/// `n-1, n-2, …, 0` and target `c+1 mod n`, a second `R_Y` column, and a
/// second ring with controls visited `n-1, 0, 1, …, n-2` and target
/// `c-1 mod n`. For `n = 4` this is `(3→0) (2→3) (1→2) (0→1)` then
/// `(3→2) (0→3) (1→0) (2→1)`, matching the published diagram column by
/// column.
pub fn build_circuit15(n: usize, layers: usize, seed: u64) -> Result<Circuit> {
    if n < 3 || layers == 0 {
        return Err(Error::Size(format!(
            "circuit 15 needs n ≥ 3 and layers ≥ 1, got n={n}, layers={layers}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n)?;
    for _ in 0..layers {
        for q in 0..n {
            circuit.push_rotation(q, Generator::Y, random_angle(&mut rng))?;
        }
        for c in (0..n).rev() {
            circuit.push_cnot(c, (c + 1) % n)?;
        }
        for q in 0..n {
            circuit.push_rotation(q, Generator::Y, random_angle(&mut rng))?;
        }
        for c in std::iter::once(n - 1).chain(0..n - 1) {
            circuit.push_cnot(c, (c + n - 1) % n)?;
        }
    }
    Ok(circuit)
}
