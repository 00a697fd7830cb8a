//! Pauli words and weighted Pauli-sum Hamiltonians.
//!
//! A word is written left to right starting from qubit 0, so `"ZX"` is
//! `Z` on qubit 0 and `X` on qubit 1. Together with the little-endian basis
//! ordering of [`StateVector`], `"ZI"` measures the least significant bit.
//!
//! Text format accepted by [`Hamiltonian::parse`]:
//!
//! ```text
//! # comment
//! -1.0523 II
//! 0.3979  IZ
//! 0.1809  XX
//! ```
//!
//! Each non-empty, non-comment line is a decimal weight followed by a word
//! over `IXYZ`. Every word must have the same length and repeated words are
//! merged by summing their weights.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::StateVector;

/// Qubit cap for [`Hamiltonian::dense_matrix`] and spectrum bounds.
pub const DENSE_MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }
}

/// A tensor product of single-qubit Paulis.
///
/// Bit masks are cached so that `P|b⟩ = i^{n_Y} (-1)^{|b ∧ z|} |b ⊕ x⟩`
/// can be evaluated without touching the letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PauliString {
    letters: Vec<Pauli>,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Size("empty Pauli word".into()));
        }
        if letters.len() >= usize::BITS as usize {
            return Err(Error::Size(format!(
                "Pauli word of length {} is too long",
                letters.len()
            )));
        }
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut y_count = 0;
        for (q, p) in letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << q,
                Pauli::Z => z_mask |= 1 << q,
                Pauli::Y => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                    y_count += 1;
                }
            }
        }
        Ok(Self {
            letters,
            x_mask,
            z_mask,
            y_count,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    /// A word that is identity except for `letters` at the given qubits.
    pub fn from_sparse(n: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut word = vec![Pauli::I; n];
        for &(q, p) in letters {
            if q >= n {
                return Err(Error::Index(format!("qubit {q} out of range for {n} qubits")));
            }
            word[q] = p;
        }
        Self::new(word)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// `i^{n_Y}`.
    fn y_phase(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Image of basis state `|b⟩`: returns `(b', phase)` with
    /// `P|b⟩ = phase |b'⟩`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let sign = if (b & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        (b ^ self.x_mask, self.y_phase() * sign)
    }

    /// `⟨ψ|P|ψ⟩`, real and in `[-1, 1]` for normalized states.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.len() {
            return Err(Error::Size(format!(
                "word of length {} on a {}-qubit state",
                self.len(),
                state.num_qubits()
            )));
        }
        let amps = state.amplitudes();
        if self.x_mask == 0 {
            let z = self.z_mask;
            return Ok(amps
                .iter()
                .enumerate()
                .map(|(b, a)| {
                    if (b & z).count_ones().is_multiple_of(2) {
                        a.norm_sqr()
                    } else {
                        -a.norm_sqr()
                    }
                })
                .sum());
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            let partner = amps[b ^ self.x_mask];
            let term = partner.conj() * a;
            if (b & self.z_mask).count_ones().is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok((acc * self.y_phase()).re)
    }
}

/// Free-function form of [`PauliString::expectation`].
pub fn expectation_of_word(state: &StateVector, word: &PauliString) -> Result<f64> {
    word.expectation(state)
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse {
                    line: 1,
                    message: format!("invalid Pauli letter {c:?} at position {i}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters
            .iter()
            .try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

impl TryFrom<String> for PauliString {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

/// Lowest and highest eigenvalue of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBounds {
    pub e_min: f64,
    pub e_max: f64,
}

impl SpectrumBounds {
    pub fn new(e_min: f64, e_max: f64) -> Result<Self> {
        if !(e_min <= e_max) {
            return Err(Error::Validation(format!(
                "spectrum bounds out of order: {e_min} > {e_max}"
            )));
        }
        Ok(Self { e_min, e_max })
    }

    /// `(E − E_min) / (E_max − E_min)`; zero for a flat spectrum.
    pub fn normalized_distance(&self, energy: f64) -> f64 {
        let width = self.e_max - self.e_min;
        if width <= 0.0 {
            return 0.0;
        }
        (energy - self.e_min) / width
    }

    /// Energy whose normalized distance equals `fraction`.
    pub fn energy_at_fraction(&self, fraction: f64) -> f64 {
        self.e_min + fraction * (self.e_max - self.e_min)
    }
}

/// `Σ w_i M_i` over Pauli words of a common length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    /// Builds a Hamiltonian, merging repeated words in order of first
    /// appearance.
    pub fn new(num_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut merged: Vec<(f64, PauliString)> = Vec::new();
        let mut position: HashMap<PauliString, usize> = HashMap::new();
        for (w, word) in terms {
            if word.len() != num_qubits {
                return Err(Error::Size(format!(
                    "word {word} has length {}, expected {num_qubits}",
                    word.len()
                )));
            }
            if !w.is_finite() {
                return Err(Error::Validation(format!("non-finite weight for {word}")));
            }
            match position.get(&word) {
                Some(&i) => merged[i].0 += w,
                None => {
                    position.insert(word.clone(), merged.len());
                    merged.push((w, word));
                }
            }
        }
        if merged.is_empty() {
            return Err(Error::Size("Hamiltonian has no terms".into()));
        }
        Ok(Self {
            num_qubits,
            terms: merged,
        })
    }

    /// Heisenberg ring `J Σ_(i,j) (X_iX_j + Y_iY_j + Z_iZ_j) + h Σ_i Z_i`.
    ///
    /// Edges are `(i, i+1 mod n)` for `n ≥ 3`; for `n = 2` the ring collapses
    /// to the single edge `(0, 1)`. Zero-weight terms are omitted.
    pub fn heisenberg(n: usize, coupling: f64, field: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Size(format!("Heisenberg ring needs ≥ 2 qubits, got {n}")));
        }
        let edges: Vec<(usize, usize)> = if n == 2 {
            vec![(0, 1)]
        } else {
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        };
        let mut terms = Vec::with_capacity(3 * edges.len() + n);
        if coupling != 0.0 {
            for &(i, j) in &edges {
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    terms.push((coupling, PauliString::from_sparse(n, &[(i, p), (j, p)])?));
                }
            }
        }
        if field != 0.0 {
            for i in 0..n {
                terms.push((field, PauliString::from_sparse(n, &[(i, Pauli::Z)])?));
            }
        }
        Self::new(n, terms)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut width: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut fields = line.split_whitespace();
            let (weight, word) = match (fields.next(), fields.next(), fields.next()) {
                (Some(w), Some(p), None) => (w, p),
                _ => {
                    return Err(parse_err(format!(
                        "expected `<weight> <word>`, got {line:?}"
                    )))
                }
            };
            let weight: f64 = weight
                .parse()
                .map_err(|_| parse_err(format!("malformed weight {weight:?}")))?;
            if !weight.is_finite() {
                return Err(parse_err(format!("non-finite weight {weight}")));
            }
            let word: PauliString = word.parse().map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(message),
                other => parse_err(other.to_string()),
            })?;
            match width {
                None => width = Some(word.len()),
                Some(w) if w != word.len() => {
                    return Err(parse_err(format!(
                        "word {word} has length {}, earlier words have length {w}",
                        word.len()
                    )))
                }
                _ => {}
            }
            terms.push((weight, word));
        }
        let Some(n) = width else {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: "no Hamiltonian terms found".into(),
            });
        };
        Self::new(n, terms)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        self.terms
            .iter()
            .map(|(w, p)| p.expectation(state).map(|e| w * e))
            .sum()
    }

    /// Row-major `2^n × 2^n` matrix of the Hamiltonian.
    pub fn dense_matrix(&self) -> Result<Vec<Complex64>> {
        if self.num_qubits > DENSE_MAX_QUBITS {
            return Err(Error::Size(format!(
                "dense matrix limited to {DENSE_MAX_QUBITS} qubits, got {}",
                self.num_qubits
            )));
        }
        let dim = 1usize << self.num_qubits;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (w, word) in &self.terms {
            for col in 0..dim {
                let (row, phase) = word.apply_to_basis(col);
                m[row * dim + col] += phase * *w;
            }
        }
        Ok(m)
    }

    /// Extreme eigenvalues by dense diagonalization.
    ///
    /// A complex Hermitian `H = R + iI` is diagonalized through the real
    /// symmetric embedding `[[R, -I], [I, R]]`, whose spectrum is that of `H`
    /// with every eigenvalue doubled.
    pub fn exact_spectrum_bounds(&self) -> Result<SpectrumBounds> {
        let eigenvalues = self.eigenvalues()?;
        let e_min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let e_max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        SpectrumBounds::new(e_min, e_max)
    }

    /// All `2^n` eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let m = self.dense_matrix()?;
        let dim = 1usize << self.num_qubits;
        let is_real = m.iter().all(|z| z.im == 0.0);
        let real = if is_real {
            DMatrix::from_fn(dim, dim, |r, c| m[r * dim + c].re)
        } else {
            DMatrix::from_fn(2 * dim, 2 * dim, |r, c| {
                let z = m[(r % dim) * dim + (c % dim)];
                match (r < dim, c < dim) {
                    (true, true) | (false, false) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                }
            })
        };
        let mut eig: Vec<f64> = real.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        if !is_real {
            // the real embedding repeats every eigenvalue
            eig = eig.into_iter().step_by(2).collect();
        }
        Ok(eig)
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, p) in &self.terms {
            writeln!(f, "{w} {p}")?;
        }
        Ok(())
    }
}
