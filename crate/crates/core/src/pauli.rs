//! Pauli-string decomposition of the Laplacian and term-wise expectation values.
//!
//! A string of `N` letters acts on `N` qubits; the first letter acts on the
//! most significant bit of the basis index `z`. Internally a string is a pair
//! of bit masks: `x` marks the qubits that flip (X or Y), `z` the qubits that
//! pick up a sign (Z or Y). Then
//!
//! ```text
//! J |w⟩ = i^{#Y} (-1)^{popcount(w & z)} |w ⊕ x⟩
//! ```
//!
//! so every string has exactly one nonzero per column and both the trace
//! `Tr(J L)` and `⟨ψ|J|ψ⟩` are single passes over the `2^N` basis states.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::state::StateVector;

/// Coefficients with magnitude at or below this are treated as exact zeros.
pub const PRUNE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: usize,
    z_mask: usize,
}

impl PauliString {
    /// The string with lexicographic rank `index` among all `4^N` strings
    /// under the letter order `I < X < Y < Z`.
    pub fn from_index(n_qubits: usize, index: usize) -> Self {
        let mut x_mask = 0;
        let mut z_mask = 0;
        for q in 0..n_qubits {
            let letter = (index >> (2 * q)) & 3;
            let bit = 1 << q;
            match letter {
                1 => x_mask |= bit,
                2 => {
                    x_mask |= bit;
                    z_mask |= bit;
                }
                3 => z_mask |= bit,
                _ => {}
            }
        }
        Self {
            n_qubits,
            x_mask,
            z_mask,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Letter acting on qubit `q`, where qubit 0 is the least significant bit.
    fn letter(&self, q: usize) -> char {
        match (self.x_mask >> q & 1, self.z_mask >> q & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// `(-1)^{popcount(w & z)}` times the real part of `i^{#Y}`, valid only for
    /// strings with an even number of Y letters.
    #[inline]
    fn real_sign(&self, w: usize) -> f64 {
        let parity = (w & self.z_mask).count_ones() + self.y_count() / 2;
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    fn phase(&self, w: usize) -> Complex64 {
        let base = match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if (w & self.z_mask).count_ones() % 2 == 0 {
            base
        } else {
            -base
        }
    }

    /// Dense matrix of the string, row-major.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = 1 << self.n_qubits;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for w in 0..dim {
            m[(w ^ self.x_mask) * dim + w] = self.phase(w);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits).rev() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n_qubits = s.chars().count();
        let mut index = 0;
        for (pos, c) in s.chars().enumerate() {
            let letter = match c {
                'I' => 0,
                'X' => 1,
                'Y' => 2,
                'Z' => 3,
                other => {
                    return Err(Error::InvalidConfig(format!("bad Pauli letter {other:?}")));
                }
            };
            index |= letter << (2 * (n_qubits - 1 - pos));
        }
        Ok(Self::from_index(n_qubits, index))
    }
}

/// `L = Σ_k c_k J_k` with real coefficients, in lexicographic string order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    n_qubits: usize,
    terms: Vec<(PauliString, f64)>,
}

impl PauliDecomposition {
    /// `c_k = Tr(J_k L) / 2^N`, keeping `|c_k| > PRUNE_EPSILON`.
    ///
    /// Strings with an odd number of Y letters are purely imaginary and their
    /// trace against a real symmetric matrix vanishes, so they are skipped.
    pub fn decompose(l: &LaplacianMatrix) -> Self {
        let n_qubits = l.n_qubits();
        let dim = l.dim();
        let scale = 1.0 / dim as f64;
        let terms = (0..1usize << (2 * n_qubits))
            .into_par_iter()
            .filter_map(|k| {
                let p = PauliString::from_index(n_qubits, k);
                if p.y_count() % 2 == 1 {
                    return None;
                }
                let trace: f64 = (0..dim)
                    .map(|w| p.real_sign(w) * l.get(w, w ^ p.x_mask))
                    .sum();
                let c = trace * scale;
                (c.abs() > PRUNE_EPSILON).then_some((p, c))
            })
            .collect();
        Self { n_qubits, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Upper bound `(4^N + 2^N) / 2` on the number of stored terms.
    pub fn term_bound(n_qubits: usize) -> usize {
        ((1usize << (2 * n_qubits)) + (1usize << n_qubits)) / 2
    }

    /// Rebuilds the dense real matrix `Σ c_k J_k`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let dim = 1 << self.n_qubits;
        let mut m = vec![0.0; dim * dim];
        for (p, c) in &self.terms {
            for w in 0..dim {
                m[(w ^ p.x_mask) * dim + w] += c * p.real_sign(w);
            }
        }
        m
    }

    /// `Σ_k c_k ⟨ψ|J_k|ψ⟩`, one pass over the state per term.
    ///
    /// The sum is real for a Hermitian operator; an imaginary residual larger
    /// than `1e-9` (relative to the coefficient mass) is reported as an error.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let amps = psi.amplitudes();
        let dim = 1usize << self.n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (p, c) in &self.terms {
            let mut term = Complex64::new(0.0, 0.0);
            for (w, a) in amps.iter().enumerate() {
                term += amps[w ^ p.x_mask].conj() * p.phase(w) * a;
            }
            total += term * c;
            mass += c.abs();
        }
        if total.im.abs() > 1e-9 * mass.max(1.0) {
            return Err(Error::ComplexExpectation(total.im));
        }
        Ok(total.re)
    }

    /// `STRING,coefficient` lines in lexicographic order.
    pub fn to_csv(&self) -> String {
        self.terms
            .iter()
            .map(|(p, c)| format!("{p},{c}\n"))
            .collect()
    }
}
