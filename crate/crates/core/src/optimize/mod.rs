//! Solvers over the phase parameters `θ`.
//!
//! Both solvers minimise the closed-form cost and report the best point
//! found together with the cut read off it. Every objective evaluation goes
//! through a [`Tracker`], which counts calls and records the cost trace.

mod ga;
mod grad;
mod local;

pub use ga::{solve_ga, GaConfig};
pub use grad::{solve_grad, GradConfig, LambdaPhase};
pub use local::{local_optimizer, LocalOptimizer, LocalOutcome, StopReason};

use rayon::prelude::*;

use crate::encoding::EncodingSpec;
use crate::error::Result;
use crate::graph::Graph;
use crate::laplacian::{cut_value, LaplacianMatrix};
use crate::pauli::PauliDecomposition;
use crate::state::{extract_cut, CostModel, ThetaVector};
use crate::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ga,
    Grad,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ga => "ga",
            Method::Grad => "grad",
        }
    }
}

/// Resource counts of the encoding for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Complexity {
    pub n_qubits: usize,
    pub n_params: usize,
    /// Upper bound on entangling gates for a diagonal phase oracle.
    pub cnot_estimate: usize,
    pub pauli_terms: usize,
}

impl Complexity {
    pub fn of(l: &LaplacianMatrix) -> Self {
        Self {
            n_qubits: l.n_qubits(),
            n_params: l.dim(),
            cnot_estimate: l.dim(),
            pauli_terms: PauliDecomposition::decompose(l).len(),
        }
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// 1-based call index.
    pub eval: usize,
    pub cost: f64,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub method: Method,
    pub best_theta: ThetaVector,
    /// Encoding used for `final_cost` and the cut extraction.
    pub encoding: EncodingSpec,
    pub assignment: Assignment,
    pub cut_value: f64,
    pub final_cost: f64,
    pub cost_trace: Vec<TracePoint>,
    pub objective_calls: usize,
    pub convergence_diag: f64,
    pub complexity: Complexity,
}

/// Counting objective shared by the solvers.
pub(crate) struct Tracker {
    model: CostModel,
    trace: Vec<TracePoint>,
    best: f64,
}

impl Tracker {
    pub(crate) fn new(l: &LaplacianMatrix) -> Self {
        Self {
            model: CostModel::new(l),
            trace: Vec::new(),
            best: f64::INFINITY,
        }
    }

    fn record(&mut self, cost: f64) {
        self.best = self.best.min(cost);
        self.trace.push(TracePoint {
            eval: self.trace.len() + 1,
            cost,
            best: self.best,
        });
    }

    pub(crate) fn eval(&mut self, theta: &[f64], enc: &EncodingSpec) -> f64 {
        let c = self
            .model
            .cost(theta, enc)
            .expect("solver keeps θ at the model dimension");
        self.record(c);
        c
    }

    /// Evaluates a batch in parallel; the trace keeps batch order.
    pub(crate) fn eval_batch(&mut self, thetas: &[Vec<f64>], enc: &EncodingSpec) -> Vec<f64> {
        let model = &self.model;
        let costs: Vec<f64> = thetas
            .par_iter()
            .map(|t| {
                model
                    .cost(t, enc)
                    .expect("solver keeps θ at the model dimension")
            })
            .collect();
        for &c in &costs {
            self.record(c);
        }
        costs
    }

    pub(crate) fn finish(
        self,
        method: Method,
        g: &Graph,
        l: &LaplacianMatrix,
        theta: Vec<f64>,
        enc: EncodingSpec,
    ) -> Result<SolveResult> {
        let final_cost = self.model.cost(&theta, &enc)?;
        let best_theta = ThetaVector::new(theta)?;
        let cut = extract_cut(&best_theta, &enc, g.n_vertices())?;
        let cut_value = cut_value(g, &cut.assignment)?;
        Ok(SolveResult {
            method,
            best_theta,
            encoding: enc,
            assignment: cut.assignment,
            cut_value,
            final_cost,
            objective_calls: self.trace.len(),
            cost_trace: self.trace,
            convergence_diag: cut.convergence_diag,
            complexity: Complexity::of(l),
        })
    }
}
