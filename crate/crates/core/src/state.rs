//! Phase-encoded state, the cost function and its gradient.
//!
//! With `R_z = R(θ_z)` the state is `|Ψ⟩ = 2^{-N/2} Σ_z exp(iπR_z) |z⟩` and
//! the cost is
//!
//! ```text
//! C(θ) = -(2^N / 4) ⟨Ψ|L|Ψ⟩
//!      = -(1/4) [ Σ_z L_zz + 2 Σ_{w<z} L_wz cos(π(R_w - R_z)) ]
//! ```
//!
//! At binary `R ∈ {0,1}^n` this is exactly minus the cut value of the
//! assignment `x_z = (-1)^{R_z}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::encoding::EncodingSpec;
use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::pauli::PauliDecomposition;
use crate::Assignment;

/// Optimizer parameters, one angle per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    /// Length must be a power of two, at least 2.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !values.len().is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "theta length {} is not a power of two >= 2",
                values.len()
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn phase_fractions(&self, enc: &EncodingSpec) -> Vec<f64> {
        self.0.iter().map(|&t| enc.value(t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `amplitude_z = 2^{-N/2} exp(iπR(θ_z))`, i.e. `U(θ) H^{⊗N} |0⟩`.
pub fn build_state(theta: &ThetaVector, enc: &EncodingSpec) -> StateVector {
    let scale = 1.0 / (theta.len() as f64).sqrt();
    let amplitudes = theta
        .values()
        .iter()
        .map(|&t| Complex64::from_polar(scale, PI * enc.value(t)))
        .collect();
    StateVector { amplitudes }
}

/// Closed-form cost over the nonzero couplings of a Laplacian.
///
/// Holds the diagonal sum and the upper-triangular nonzeros so repeated
/// evaluations cost `O(2^N + |E|)`.
#[derive(Debug, Clone)]
pub struct CostModel {
    dim: usize,
    diag_sum: f64,
    couplings: Vec<(usize, usize, f64)>,
}

impl CostModel {
    pub fn new(l: &LaplacianMatrix) -> Self {
        Self {
            dim: l.dim(),
            diag_sum: l.trace(),
            couplings: l.off_diagonal(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Cost from precomputed phase fractions `R_z`.
    pub fn cost_from_fractions(&self, r: &[f64]) -> f64 {
        let pairs: f64 = self
            .couplings
            .iter()
            .map(|&(w, z, l)| l * (PI * (r[w] - r[z])).cos())
            .sum();
        -0.25 * (self.diag_sum + 2.0 * pairs)
    }

    pub fn cost(&self, theta: &[f64], enc: &EncodingSpec) -> Result<f64> {
        self.check(theta)?;
        let r: Vec<f64> = theta.iter().map(|&t| enc.value(t)).collect();
        Ok(self.cost_from_fractions(&r))
    }

    pub fn gradient(&self, theta: &[f64], enc: &EncodingSpec) -> Result<Vec<f64>> {
        self.check(theta)?;
        let r: Vec<f64> = theta.iter().map(|&t| enc.value(t)).collect();
        // Σ_w L_wz sin(π(R_w - R_z)) for every z
        let mut s = vec![0.0; self.dim];
        for &(w, z, l) in &self.couplings {
            let v = l * (PI * (r[w] - r[z])).sin();
            s[z] += v;
            s[w] -= v;
        }
        theta
            .iter()
            .zip(&s)
            .map(|(&t, &sz)| Ok(-0.5 * PI * enc.derivative(t)? * sz))
            .collect()
    }
}

/// `C(θ) = -(1/4)[Σ_z L_zz + 2 Σ_{w<z} L_wz cos(π(R_w - R_z))]`.
pub fn cost_closed_form(
    theta: &ThetaVector,
    enc: &EncodingSpec,
    l: &LaplacianMatrix,
) -> Result<f64> {
    CostModel::new(l).cost(theta.values(), enc)
}

/// `C(θ) = -(2^N / 4) ⟨Ψ(θ)|L|Ψ(θ)⟩` through the Pauli expectation.
pub fn cost_statevector(
    theta: &ThetaVector,
    enc: &EncodingSpec,
    d: &PauliDecomposition,
) -> Result<f64> {
    let dim = 1usize << d.n_qubits();
    if theta.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: theta.len(),
        });
    }
    let psi = build_state(theta, enc);
    Ok(-(dim as f64) / 4.0 * d.expectation(&psi)?)
}

/// `∂C/∂θ_z = -(π/2) R'(θ_z) Σ_{w≠z} L_wz sin(π(R_w - R_z))`.
pub fn cost_gradient(
    theta: &ThetaVector,
    enc: &EncodingSpec,
    l: &LaplacianMatrix,
) -> Result<Vec<f64>> {
    if !enc.is_differentiable() {
        return Err(Error::Unsupported("gradient of the step encoding"));
    }
    CostModel::new(l).gradient(theta.values(), enc)
}

/// Binary cut read off the phase fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct CutExtraction {
    /// `+1` where `R(θ_z) < 0.5`, `-1` otherwise.
    pub assignment: Assignment,
    /// `max_z min(R_z, 1 - R_z)` over the first `n` entries; 0 means every
    /// fraction sits exactly at 0 or 1.
    pub convergence_diag: f64,
}

pub fn extract_cut(theta: &ThetaVector, enc: &EncodingSpec, n: usize) -> Result<CutExtraction> {
    if n > theta.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            found: n,
        });
    }
    let mut assignment = Vec::with_capacity(n);
    let mut diag: f64 = 0.0;
    for &t in &theta.values()[..n] {
        let r = enc.value(t);
        assignment.push(if r < 0.5 { 1 } else { -1 });
        diag = diag.max(r.min(1.0 - r));
    }
    Ok(CutExtraction {
        assignment,
        convergence_diag: diag,
    })
}
