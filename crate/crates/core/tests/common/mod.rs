//! Independent oracles for the integration tests: dense Kronecker-product
//! operators, a Jacobi eigensolver and random circuit generators.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rotoselect::circuit::{Circuit, ConjugatedGenerator, FixedGate, Gate, Generator};
use rotoselect::pauli::{Hamiltonian, Pauli, PauliString};
use rotoselect::qstate::{StateVector, UnitVector3};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Dense {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C]]) -> Self {
        let dim = rows.len();
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn from_vec(dim: usize, data: Vec<C>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn at(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &Dense) -> Dense {
        let dim = self.dim * other.dim;
        let mut out = Dense::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.at(r1, c1);
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.data[(r1 * other.dim + r2) * dim + c1 * other.dim + c2] =
                            a * other.at(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                for col in 0..n {
                    out.data[r * n + col] += a * other.at(k, col);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Dense) -> Dense {
        Dense {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Dense {
        Dense {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dagger(&self) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for r in 0..n {
            for col in 0..n {
                out.data[col * n + r] = self.at(r, col).conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|k| self.at(r, k) * v[k]).sum())
            .collect()
    }

    pub fn max_diff(&self, other: &Dense) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `exp(−i t · self)` by scaling and squaring of a Taylor series.
    pub fn expm_i(&self, t: f64) -> Dense {
        let squarings = 8;
        let h = self.scale(c(0.0, -t / f64::from(1u32 << squarings)));
        let mut term = Dense::identity(self.dim);
        let mut sum = Dense::identity(self.dim);
        for k in 1..30 {
            term = term.mul(&h).scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }
}

pub fn pauli_matrix(p: Pauli) -> Dense {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => Dense::from_rows(&[&[l, o], &[o, l]]),
        Pauli::X => Dense::from_rows(&[&[o, l], &[l, o]]),
        Pauli::Y => Dense::from_rows(&[&[o, -i], &[i, o]]),
        Pauli::Z => Dense::from_rows(&[&[l, o], &[o, -l]]),
    }
}

/// Full operator with `ops[q]` acting on qubit `q`; qubit 0 is the least
/// significant bit, so the Kronecker product runs from the last qubit down.
pub fn embed(ops: &[Dense]) -> Dense {
    ops.iter()
        .rev()
        .fold(Dense::identity(1), |acc, op| acc.kron(op))
}

/// `block` on qubits `first..first+k` (local bit j ↔ qubit first+j).
pub fn embed_block(n: usize, first: usize, block: &Dense) -> Dense {
    let k = block.dim.trailing_zeros() as usize;
    Dense::identity(1 << (n - first - k))
        .kron(block)
        .kron(&Dense::identity(1 << first))
}

pub fn single(n: usize, q: usize, op: &Dense) -> Dense {
    embed_block(n, q, op)
}

pub fn word_matrix(word: &PauliString) -> Dense {
    let ops: Vec<Dense> = word.letters().iter().map(|&p| pauli_matrix(p)).collect();
    embed(&ops)
}

pub fn hamiltonian_matrix(h: &Hamiltonian) -> Dense {
    let dim = 1 << h.num_qubits();
    h.terms().iter().fold(Dense::zeros(dim), |acc, (w, word)| {
        acc.add(&word_matrix(word).scale(c(*w, 0.0)))
    })
}

pub fn generator_matrix(g: &Generator) -> Dense {
    match g {
        Generator::X => pauli_matrix(Pauli::X),
        Generator::Y => pauli_matrix(Pauli::Y),
        Generator::Z => pauli_matrix(Pauli::Z),
        Generator::Axis(a) => {
            let [x, y, z] = a.components();
            pauli_matrix(Pauli::X)
                .scale(c(x, 0.0))
                .add(&pauli_matrix(Pauli::Y).scale(c(y, 0.0)))
                .add(&pauli_matrix(Pauli::Z).scale(c(z, 0.0)))
        }
        Generator::Conjugated(cg) => {
            let k = cg.num_qubits();
            let v = Dense::from_vec(1 << k, cg.conjugator().to_vec());
            v.mul(&word_matrix(cg.word())).mul(&v.dagger())
        }
    }
}

pub fn fixed_matrix(n: usize, gate: &FixedGate) -> Dense {
    let proj0 = Dense::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
    let proj1 = Dense::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]]);
    let (control, target, op) = match *gate {
        FixedGate::Cz(a, b) => (a, b, pauli_matrix(Pauli::Z)),
        FixedGate::Cnot { control, target } => (control, target, pauli_matrix(Pauli::X)),
    };
    let mut low: Vec<Dense> = (0..n).map(|_| pauli_matrix(Pauli::I)).collect();
    low[control] = proj0;
    let mut high: Vec<Dense> = (0..n).map(|_| pauli_matrix(Pauli::I)).collect();
    high[control] = proj1;
    high[target] = op;
    embed(&low).add(&embed(&high))
}

/// Unitary of a whole circuit, built gate by gate from dense matrices and
/// Taylor-series exponentials.
pub fn circuit_unitary(circuit: &Circuit) -> Dense {
    let n = circuit.num_qubits();
    let mut u = Dense::identity(1 << n);
    for gate in circuit.gates() {
        let g = match gate {
            Gate::Fixed(f) => fixed_matrix(n, f),
            Gate::Rotation(r) => {
                let block = generator_matrix(&r.generator).expm_i(r.angle / 2.0);
                embed_block(n, r.qubit, &block)
            }
        };
        u = g.mul(&u);
    }
    u
}

pub fn circuit_state(circuit: &Circuit) -> Vec<C> {
    let u = circuit_unitary(circuit);
    let mut zero = vec![c(0.0, 0.0); u.dim];
    zero[0] = c(1.0, 0.0);
    u.apply(&zero)
}

pub fn expectation(m: &Dense, psi: &[C]) -> f64 {
    let mpsi = m.apply(psi);
    psi.iter().zip(&mpsi).map(|(a, b)| a.conj() * b).sum::<C>().re
}

pub fn dense_energy(circuit: &Circuit, h: &Hamiltonian) -> f64 {
    expectation(&hamiltonian_matrix(h), &circuit_state(circuit))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian matrix via its real embedding; each eigenvalue
/// of the embedding is doubled, so every second one is kept.
pub fn hermitian_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.dim;
    let mut real = vec![vec![0.0; 2 * n]; 2 * n];
    for r in 0..n {
        for col in 0..n {
            let z = m.at(r, col);
            real[r][col] = z.re;
            real[r + n][col + n] = z.re;
            real[r][col + n] = -z.im;
            real[r + n][col] = z.im;
        }
    }
    jacobi_eigenvalues(real).into_iter().step_by(2).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

pub fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}

pub fn random_axis(rng: &mut ChaCha8Rng) -> UnitVector3 {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
            return UnitVector3::normalized(v[0], v[1], v[2]).unwrap();
        }
    }
}

/// Haar-ish random unitary by Gram–Schmidt on complex Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C> {
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C> = (0..dim)
            .map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        for u in &cols {
            let proj: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut m = vec![c(0.0, 0.0); dim * dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[i * dim + j] = *x;
        }
    }
    m
}

pub fn random_pauli_word(rng: &mut ChaCha8Rng, k: usize, allow_identity: bool) -> PauliString {
    loop {
        let letters: Vec<Pauli> = (0..k)
            .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
            .collect();
        let word = PauliString::new(letters).unwrap();
        if allow_identity || !word.is_identity() {
            return word;
        }
    }
}

pub fn random_conjugated(rng: &mut ChaCha8Rng, k: usize) -> Generator {
    let word = random_pauli_word(rng, k, false);
    let v = random_unitary(rng, 1 << k);
    Generator::Conjugated(ConjugatedGenerator::new(word, v).unwrap())
}

pub fn random_canonical(rng: &mut ChaCha8Rng) -> Generator {
    Generator::CANONICAL[rng.random_range(0..3)].clone()
}

/// Random generator of any kind that fits at `qubit` in an `n`-qubit circuit.
pub fn random_generator(rng: &mut ChaCha8Rng, n: usize, qubit: usize) -> Generator {
    match rng.random_range(0..5) {
        0..=2 => random_canonical(rng),
        3 => Generator::Axis(random_axis(rng)),
        _ if qubit + 1 < n && rng.random_bool(0.5) => random_conjugated(rng, 2),
        _ => random_conjugated(rng, 1),
    }
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Random circuit of `gates` gates with at least one rotation. With
/// `canonical_only` every generator is X, Y or Z.
pub fn random_circuit(rng: &mut ChaCha8Rng, n: usize, gates: usize, canonical_only: bool) -> Circuit {
    let mut circuit = Circuit::new(n).unwrap();
    for i in 0..gates {
        let rotation = i == 0 || n == 1 || rng.random_bool(0.6);
        if rotation {
            let q = rng.random_range(0..n);
            let g = if canonical_only {
                random_canonical(rng)
            } else {
                random_generator(rng, n, q)
            };
            circuit.push_rotation(q, g, random_angle(rng)).unwrap();
        } else {
            let (a, b) = random_pair(rng, n);
            if rng.random_bool(0.5) {
                circuit.push_cz(a, b).unwrap();
            } else {
                circuit.push_cnot(a, b).unwrap();
            }
        }
    }
    circuit
}

/// Random Hamiltonian of `terms` weighted words, including identity words.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> Hamiltonian {
    let list: Vec<(f64, PauliString)> = (0..terms)
        .map(|_| (rng.random_range(-1.0..1.0), random_pauli_word(rng, n, true)))
        .collect();
    Hamiltonian::new(n, list).unwrap()
}

pub fn max_state_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
