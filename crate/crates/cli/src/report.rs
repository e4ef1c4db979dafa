use std::collections::BTreeMap;

use logq::optimize::{Complexity, TracePoint};
use logq::{EncodingSpec, SolveResult};
use serde::Serialize;

/// Provenance block embedded in every result file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub timestamp: String,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, config: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config,
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EncodingReport {
    pub kind: &'static str,
    /// Absent for the step map, whose steepness is infinite.
    pub lambda: Option<f64>,
    pub kappa: f64,
    pub gamma: f64,
}

impl From<&EncodingSpec> for EncodingReport {
    fn from(e: &EncodingSpec) -> Self {
        Self {
            kind: e.kind.name(),
            lambda: e.lambda.is_finite().then_some(e.lambda),
            kappa: e.kappa,
            gamma: e.gamma,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ComplexityReport {
    pub n_qubits: usize,
    pub n_params: usize,
    pub cnot_estimate: usize,
    pub pauli_terms: usize,
}

impl From<Complexity> for ComplexityReport {
    fn from(c: Complexity) -> Self {
        Self {
            n_qubits: c.n_qubits,
            n_params: c.n_params,
            cnot_estimate: c.cnot_estimate,
            pauli_terms: c.pauli_terms,
        }
    }
}

/// Field order here is the key order in the JSON file.
#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub manifest: RunManifest,
    pub method: &'static str,
    pub n_vertices: usize,
    pub encoding: EncodingReport,
    pub cut_value: f64,
    pub final_cost: f64,
    pub objective_calls: usize,
    pub convergence_diag: f64,
    pub complexity: ComplexityReport,
    pub assignment: Vec<i8>,
    pub best_theta: Vec<f64>,
}

impl SolveReport {
    pub fn new(manifest: RunManifest, n_vertices: usize, r: &SolveResult) -> Self {
        Self {
            manifest,
            method: r.method.name(),
            n_vertices,
            encoding: (&r.encoding).into(),
            cut_value: r.cut_value,
            final_cost: r.final_cost,
            objective_calls: r.objective_calls,
            convergence_diag: r.convergence_diag,
            complexity: r.complexity.into(),
            assignment: r.assignment.clone(),
            best_theta: r.best_theta.values().to_vec(),
        }
    }
}

pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("eval,cost,best\n");
    for p in trace {
        out.push_str(&format!("{},{},{}\n", p.eval, p.cost, p.best));
    }
    out
}

/// Human-readable summary printed after `solve`.
pub fn summary(r: &SolveResult) -> String {
    let c = r.complexity;
    format!(
        "method: {}\ncut value: {}\nfinal cost: {}\nobjective calls: {}\n\
         convergence diag: {:e}\nqubits: {}\nparameters: {}\ncnot estimate: {}\npauli terms: {}\n",
        r.method.name(),
        r.cut_value,
        r.final_cost,
        r.objective_calls,
        r.convergence_diag,
        c.n_qubits,
        c.n_params,
        c.cnot_estimate,
        c.pauli_terms,
    )
}

pub const BENCH_HEADER: &str = "instance,n,density,seed,method,final_cost,cut_value,calls,wall_ms";

pub struct BenchRow<'a> {
    pub instance: &'a str,
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    pub result: &'a SolveResult,
    pub wall_ms: u128,
}

impl BenchRow<'_> {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.density,
            self.seed,
            self.result.method.name(),
            self.result.final_cost,
            self.result.cut_value,
            self.result.objective_calls,
            self.wall_ms,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use logq::analytic::example_graph;
    use logq::{solve_ga, GaConfig};

    #[test]
    fn report_keys_keep_declaration_order() {
        let r = solve_ga(
            &example_graph(),
            &EncodingSpec::step(),
            &GaConfig {
                population_size: 4,
                generations: 2,
                ..GaConfig::default()
            },
        )
        .unwrap();
        let m = RunManifest::new("solve", BTreeMap::new(), 0);
        let json = serde_json::to_string(&SolveReport::new(m, 4, &r)).unwrap();
        let keys = [
            "\"manifest\"",
            "\"method\"",
            "\"encoding\"",
            "\"cut_value\"",
            "\"best_theta\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.contains("\"lambda\":null"));
        assert_eq!(trace_csv(&r.cost_trace).lines().count(), 1 + 12);
    }
}
