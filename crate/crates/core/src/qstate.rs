//! Dense statevector simulation.
//!
//! Amplitudes are stored in computational-basis order with qubit 0 as the
//! least significant bit of the basis index, so `|q2 q1 q0⟩ = |1 0 1⟩` lives
//! at index 5. The Pauli module uses the same convention.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{FixedGate, Generator};
use crate::error::{Error, Result};

/// Largest register the simulator accepts unless a different cap is passed.
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Tolerance on `Σ|a|² = 1` for states handed in from outside.
pub const NORM_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2×2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// A real unit vector `(c_x, c_y, c_z)` defining the generator
/// `c_x X + c_y Y + c_z Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const AXIS_TOLERANCE: f64 = 1e-9;

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::AXIS_TOLERANCE {
            return Err(Error::Validation(format!(
                "rotation axis ({x}, {y}, {z}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Rescales an arbitrary non-zero vector onto the unit sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation("cannot normalize a zero axis".into()));
        }
        Self::new(x / norm, y / norm, z / norm)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// `exp(-i θ/2 (c_x X + c_y Y + c_z Z))` for a unit axis.
pub fn axis_rotation_matrix(axis: &UnitVector3, theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let [x, y, z] = axis.components();
    [
        [Complex64::new(c, -s * z), Complex64::new(-s * y, -s * x)],
        [Complex64::new(s * y, -s * x), Complex64::new(c, s * z)],
    ]
}

/// An n-qubit pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits, `1 ≤ n ≤ 14`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_cap(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_cap(n: usize, max_qubits: usize) -> Result<Self> {
        if n == 0 || n > max_qubits {
            return Err(Error::Size(format!(
                "qubit count {n} outside supported range 1..={max_qubits}"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[0] = ONE;
        Ok(Self {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(n)?;
        if index >= state.amplitudes.len() {
            return Err(Error::Index(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        state.amplitudes[0] = ZERO;
        state.amplitudes[index] = ONE;
        Ok(state)
    }

    /// Wraps a normalized amplitude vector whose length is a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Size(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Size(format!(
                "{num_qubits} qubits exceeds cap {DEFAULT_MAX_QUBITS}"
            )));
        }
        let state = Self {
            num_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix to one qubit.
    pub fn apply_matrix2(&mut self, qubit: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = 1usize << qubit;
        let dim = self.amplitudes.len();
        let mut block = 0;
        while block < dim {
            for i0 in block..block + stride {
                let i1 = i0 | stride;
                let a0 = self.amplitudes[i0];
                let a1 = self.amplitudes[i1];
                self.amplitudes[i0] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
            block += stride << 1;
        }
        Ok(())
    }

    /// Applies `exp(-i θ/2 H)` on `qubit`. Multi-qubit generators act on the
    /// contiguous block starting at `qubit`.
    pub fn apply_rotation(&mut self, qubit: usize, generator: &Generator, theta: f64) -> Result<()> {
        let (s, c) = (theta / 2.0).sin_cos();
        match generator {
            Generator::X => self.apply_matrix2(
                qubit,
                &[
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ],
            ),
            Generator::Y => self.apply_matrix2(
                qubit,
                &[
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ],
            ),
            Generator::Z => {
                self.check_qubit(qubit)?;
                let lower = Complex64::new(c, -s);
                let upper = Complex64::new(c, s);
                let mask = 1usize << qubit;
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if i & mask == 0 { lower } else { upper };
                }
                Ok(())
            }
            Generator::Axis(axis) => self.apply_arbitrary_axis(qubit, axis, theta),
            Generator::Conjugated(g) => {
                let k = g.num_qubits();
                let dim = 1usize << k;
                let h = g.matrix();
                let mut u = vec![ZERO; dim * dim];
                for r in 0..dim {
                    for col in 0..dim {
                        let id = if r == col { c } else { 0.0 };
                        u[r * dim + col] = Complex64::new(id, 0.0) - Complex64::new(0.0, s) * h[r * dim + col];
                    }
                }
                self.apply_dense_block(qubit, k, &u)
            }
        }
    }

    /// Rotation about `c_x X + c_y Y + c_z Z`.
    pub fn apply_arbitrary_axis(&mut self, qubit: usize, axis: &UnitVector3, theta: f64) -> Result<()> {
        self.apply_matrix2(qubit, &axis_rotation_matrix(axis, theta))
    }

    /// Applies a dense `2^k × 2^k` row-major matrix to qubits
    /// `first..first + k`, local bit `j` of the block mapping to qubit
    /// `first + j`.
    pub fn apply_dense_block(&mut self, first: usize, k: usize, matrix: &[Complex64]) -> Result<()> {
        if k == 0 || first + k > self.num_qubits {
            return Err(Error::Index(format!(
                "block of {k} qubits starting at {first} does not fit in {} qubits",
                self.num_qubits
            )));
        }
        let local = 1usize << k;
        if matrix.len() != local * local {
            return Err(Error::Size(format!(
                "dense block needs {} entries, got {}",
                local * local,
                matrix.len()
            )));
        }
        let block_mask = (local - 1) << first;
        let mut gathered = vec![ZERO; local];
        for base in 0..self.amplitudes.len() {
            if base & block_mask != 0 {
                continue;
            }
            for (j, g) in gathered.iter_mut().enumerate() {
                *g = self.amplitudes[base | (j << first)];
            }
            for r in 0..local {
                let row = &matrix[r * local..(r + 1) * local];
                self.amplitudes[base | (r << first)] =
                    row.iter().zip(&gathered).map(|(m, a)| m * a).sum();
            }
        }
        Ok(())
    }

    pub fn apply_fixed(&mut self, gate: &FixedGate) -> Result<()> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Index(format!(
                "two-qubit gate on repeated qubit {a}"
            )));
        }
        match gate {
            FixedGate::Cz(..) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            FixedGate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amplitudes.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amplitudes.swap(i, i | tmask);
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Size(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}
