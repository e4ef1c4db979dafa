//! Log-qubit (LogQ) phase encoding of MaxCut problems.
//!
//! A graph with `n` vertices is mapped onto `N = ⌈log2 n⌉` qubits: each
//! computational basis state `|z⟩` carries a phase `exp(iπR(θ_z))` and the
//! binary decision for vertex `z` is read from whether `R(θ_z)` settles at 0
//! or 1. The cost is (a rescaled) expectation value of the graph Laplacian,
//! evaluated either through its Pauli decomposition or in closed form.
//!
//! The crate provides the full pipeline:
//!
//! - [`graph`]: problem instances, edge-list parsing and seeded `G(n, p)` generation
//! - [`laplacian`]: padded Laplacian matrix and cut values
//! - [`pauli`]: Pauli-string decomposition and term-wise expectation values
//! - [`encoding`]: the step, sigmoid and distorted-sigmoid phase maps `R`
//! - [`state`]: phase-encoded state, cost (two routes) and analytic gradient
//! - [`optimize`]: genetic-algorithm and trust-region (LogQ-grad) solvers
//! - [`oracle`]: brute-force MaxCut for small graphs
//! - [`analytic`]: the 4-vertex model and its one-parameter landscape slices

pub mod analytic;
pub mod encoding;
mod error;
pub mod graph;
pub mod laplacian;
pub mod optimize;
pub mod oracle;
pub mod pauli;
pub mod state;

pub use encoding::{EncodingKind, EncodingSpec};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use laplacian::{cut_value, LaplacianMatrix};
pub use optimize::{
    local_optimizer, solve_ga, solve_grad, GaConfig, GradConfig, LambdaPhase, LocalOptimizer,
    SolveResult,
};
pub use oracle::{brute_force_maxcut, OracleResult};
pub use pauli::{PauliDecomposition, PauliString};
pub use state::{StateVector, ThetaVector};

/// A ±1 vertex assignment; `+1` and `-1` name the two sides of the cut.
pub type Assignment = Vec<i8>;
