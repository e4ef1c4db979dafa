//! Phase-fraction maps `R: θ ↦ [0, 1]`.
//!
//! Three families are provided:
//!
//! - **Step**: `0` on `[0, π)`, `1` on `[π, 2π]`. Angles outside `[0, 2π]` are
//!   wrapped modulo `2π`.
//! - **Sigmoid**: `sgm_λ(π - θ)` with `sgm_λ(u) = 1 / (1 + exp(λu))`. Tends to
//!   the step map as `λ → ∞`.
//! - **Distorted sigmoid**: on the extended interval `[-γπ, (2+γ)π]`,
//!
//!   ```text
//!   R(θ) = sgm_λ(π - θ) · sgm_{-λ}((2+κ)π - θ) + sgm_λ(κπ + θ)
//!   ```
//!
//!   i.e. the sigmoid rise at `π`, a fall back to 0 past `(2+κ)π`, and a
//!   rise to 1 left of `-κπ`. The edges mirror the transition at `π` one
//!   period away, so the domain behaves like a slightly overlapping circle.
//!   Angles outside the interval are clamped to it.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Step,
    Sigmoid,
    DistortedSigmoid,
}

impl EncodingKind {
    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Step => "step",
            EncodingKind::Sigmoid => "sigmoid",
            EncodingKind::DistortedSigmoid => "distorted",
        }
    }
}

impl std::str::FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step" => Ok(EncodingKind::Step),
            "sigmoid" => Ok(EncodingKind::Sigmoid),
            "distorted" | "distorted-sigmoid" => Ok(EncodingKind::DistortedSigmoid),
            other => Err(Error::InvalidEncoding(format!(
                "unknown encoding {other:?}"
            ))),
        }
    }
}

pub const DEFAULT_LAMBDA: f64 = 5.0;
pub const DEFAULT_KAPPA: f64 = 0.2;
pub const DEFAULT_GAMMA: f64 = 0.6;

/// An encoding family together with its shape parameters.
///
/// `lambda` is the steepness, `kappa` the offset of the distorted edges and
/// `gamma` the fraction of `π` by which the parameter box extends past
/// `[0, 2π]` on either side. Invariants: `lambda > 0`, `0 <= kappa < gamma <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingSpec {
    pub kind: EncodingKind,
    pub lambda: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl EncodingSpec {
    pub fn new(kind: EncodingKind, lambda: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidEncoding(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(0.0 <= kappa && kappa < gamma && gamma <= 1.0) {
            return Err(Error::InvalidEncoding(format!(
                "need 0 <= kappa < gamma <= 1, got kappa = {kappa}, gamma = {gamma}"
            )));
        }
        Ok(Self {
            kind,
            lambda,
            kappa,
            gamma,
        })
    }

    pub fn step() -> Self {
        Self {
            kind: EncodingKind::Step,
            lambda: f64::INFINITY,
            kappa: DEFAULT_KAPPA,
            gamma: DEFAULT_GAMMA,
        }
    }

    pub fn sigmoid(lambda: f64) -> Result<Self> {
        Self::new(EncodingKind::Sigmoid, lambda, DEFAULT_KAPPA, DEFAULT_GAMMA)
    }

    pub fn distorted(lambda: f64, kappa: f64, gamma: f64) -> Result<Self> {
        Self::new(EncodingKind::DistortedSigmoid, lambda, kappa, gamma)
    }

    /// Same family and shape, different steepness. Step ignores `lambda`.
    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        match self.kind {
            EncodingKind::Step => Ok(self),
            kind => Self::new(kind, lambda, self.kappa, self.gamma),
        }
    }

    /// Parameter box: `[0, 2π]` for the step map, `[-γπ, (2+γ)π]` otherwise.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            EncodingKind::Step => (0.0, TAU),
            _ => (-self.gamma * PI, (2.0 + self.gamma) * PI),
        }
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self.kind {
            EncodingKind::Step => r_step(theta),
            EncodingKind::Sigmoid => r_sigmoid(theta, self.lambda),
            EncodingKind::DistortedSigmoid => {
                let (lo, hi) = self.domain();
                r_distorted(theta.clamp(lo, hi), self.lambda, self.kappa)
            }
        }
    }

    /// `dR/dθ`. The step map has no usable derivative.
    pub fn derivative(&self, theta: f64) -> Result<f64> {
        match self.kind {
            EncodingKind::Step => Err(Error::Unsupported(
                "step encoding has zero derivative almost everywhere",
            )),
            EncodingKind::Sigmoid => {
                let s = r_sigmoid(theta, self.lambda);
                Ok(self.lambda * s * (1.0 - s))
            }
            EncodingKind::DistortedSigmoid => {
                let (lo, hi) = self.domain();
                if theta < lo || theta > hi {
                    return Ok(0.0);
                }
                Ok(distorted_derivative(theta, self.lambda, self.kappa))
            }
        }
    }

    pub fn is_differentiable(&self) -> bool {
        self.kind != EncodingKind::Step
    }
}

/// `1 / (1 + exp(-x))` without overflow for large `|x|`.
#[inline]
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `sgm_λ(u) = 1 / (1 + exp(λu))`.
#[inline]
pub fn sgm(lambda: f64, u: f64) -> f64 {
    logistic(-lambda * u)
}

pub fn r_step(theta: f64) -> f64 {
    let t = if (0.0..=TAU).contains(&theta) {
        theta
    } else {
        theta.rem_euclid(TAU)
    };
    if t < PI {
        0.0
    } else {
        1.0
    }
}

pub fn r_sigmoid(theta: f64, lambda: f64) -> f64 {
    sgm(lambda, PI - theta)
}

/// Distorted sigmoid without clamping; see the module docs.
pub fn r_distorted(theta: f64, lambda: f64, kappa: f64) -> f64 {
    sgm(lambda, PI - theta) * sgm(-lambda, (2.0 + kappa) * PI - theta)
        + sgm(lambda, kappa * PI + theta)
}

fn distorted_derivative(theta: f64, lambda: f64, kappa: f64) -> f64 {
    let rise = sgm(lambda, PI - theta);
    let fall = sgm(-lambda, (2.0 + kappa) * PI - theta);
    let left = sgm(lambda, kappa * PI + theta);
    let d_rise = lambda * rise * (1.0 - rise);
    let d_fall = -lambda * fall * (1.0 - fall);
    let d_left = -lambda * left * (1.0 - left);
    d_rise * fall + rise * d_fall + d_left
}
