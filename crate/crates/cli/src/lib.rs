//! Command-line front end: `solve`, `bench`, `oracle`, `analytic`, `dump`.

pub mod args;
mod config;
mod report;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use logq::analytic::{slice, slice_csv, SliceRequest, ThetaGrid};
use logq::encoding::{DEFAULT_GAMMA, DEFAULT_KAPPA, DEFAULT_LAMBDA};
use logq::graph::{gnp_random_graph, parse_edge_list};
use logq::{
    brute_force_maxcut, solve_ga, solve_grad, EncodingKind, EncodingSpec, GaConfig, GradConfig,
    Graph, LaplacianMatrix, PauliDecomposition,
};

use args::*;
use config::Resolver;
use report::{BenchRow, RunManifest, SolveReport, BENCH_HEADER};

pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut out = String::new();
    match cli.command {
        Command::Solve(a) => cmd_solve(a, &mut out)?,
        Command::Bench(a) => cmd_bench(a, &mut out)?,
        Command::Oracle(a) => cmd_oracle(a, &mut out)?,
        Command::Analytic(a) => cmd_analytic(a, &mut out)?,
        Command::Dump(a) => cmd_dump(a, &mut out)?,
    }
    std::io::stdout().lock().write_all(out.as_bytes())?;
    Ok(())
}

/// A loaded instance plus the label and parameters it was built from.
struct Instance {
    label: String,
    graph: Graph,
    density: f64,
    seed: Option<u64>,
}

fn parse_gnp(v: &[String]) -> Result<(usize, f64, u64)> {
    let [n, p, seed] = v else {
        bail!("--gnp takes N P SEED");
    };
    Ok((
        n.parse()
            .with_context(|| format!("--gnp: bad vertex count {n:?}"))?,
        p.parse()
            .with_context(|| format!("--gnp: bad density {p:?}"))?,
        seed.parse()
            .with_context(|| format!("--gnp: bad seed {seed:?}"))?,
    ))
}

fn gnp_instance(v: &[String]) -> Result<Instance> {
    let (n, p, seed) = parse_gnp(v)?;
    Ok(Instance {
        label: format!("gnp-{n}-{p}-{seed}"),
        graph: gnp_random_graph(n, p, seed, 1.0)?,
        density: p,
        seed: Some(seed),
    })
}

fn file_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    let n = graph.n_vertices() as f64;
    let pairs = n * (n - 1.0) / 2.0;
    let density = if pairs > 0.0 {
        graph.n_edges() as f64 / pairs
    } else {
        0.0
    };
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(Instance {
        label,
        graph,
        density,
        seed: None,
    })
}

fn load(source: &GraphSource) -> Result<Instance> {
    match (&source.graph, &source.gnp) {
        (Some(path), _) => file_instance(path),
        (None, Some(v)) => gnp_instance(v),
        (None, None) => bail!("give --graph FILE or --gnp N P SEED"),
    }
}

fn enum_parser<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s, true)
}

fn resolve_encoding(
    r: &mut Resolver,
    o: &EncodingOpts,
    default: EncodingArg,
) -> Result<EncodingSpec> {
    let kind = r.get_with("encoding", o.encoding, default, enum_parser)?;
    let lambda = r.get("lambda", o.lambda, DEFAULT_LAMBDA)?;
    let kappa = r.get("kappa", o.kappa, DEFAULT_KAPPA)?;
    let gamma = r.get("gamma", o.gamma, DEFAULT_GAMMA)?;
    let kind = match kind {
        EncodingArg::Step => return Ok(EncodingSpec::step()),
        EncodingArg::Sigmoid => EncodingKind::Sigmoid,
        EncodingArg::Distorted => EncodingKind::DistortedSigmoid,
    };
    Ok(EncodingSpec::new(kind, lambda, kappa, gamma)?)
}

fn resolve_ga(
    r: &mut Resolver,
    o: &GaOpts,
    pop: usize,
    gens: usize,
    seed: u64,
) -> Result<GaConfig> {
    let d = GaConfig::default();
    Ok(GaConfig {
        population_size: r.get("pop", o.pop, pop)?,
        generations: r.get("gens", o.gens, gens)?,
        mutation_rate: r.get("mutation_rate", o.mutation_rate, d.mutation_rate)?,
        crossover_rate: r.get("crossover_rate", o.crossover_rate, d.crossover_rate)?,
        elite_count: r.get("elite", o.elite, d.elite_count)?,
        seed,
    })
}

fn resolve_grad(r: &mut Resolver, o: &GradOpts, max_evals: usize, seed: u64) -> Result<GradConfig> {
    let d = GradConfig::default();
    Ok(GradConfig {
        multistarts: r.get("multistarts", o.multistarts, d.multistarts)?,
        max_evals: r.get("max_evals", o.max_evals, max_evals)?,
        rhobeg_initial: r.get("rhobeg", o.rhobeg, d.rhobeg_initial)?,
        rhoend: r.get("rhoend", o.rhoend, d.rhoend)?,
        post_lambda: r.get("post_lambda", o.post_lambda, d.post_lambda)?,
        kick_size: r.get("kick_size", o.kick_size, d.kick_size)?,
        seed,
        ..d
    })
}

/// For the trust-region solver `--lambda` sets the first annealing phase.
fn with_first_phase(mut cfg: GradConfig, enc: &EncodingSpec) -> GradConfig {
    if enc.kind != EncodingKind::Step {
        if let Some(p) = cfg.lambda_schedule.first_mut() {
            p.lambda = enc.lambda;
        }
    }
    cfg
}

fn cmd_solve(a: SolveArgs, out: &mut String) -> Result<()> {
    let inst = load(&a.source)?;
    let mut r = Resolver::load(a.config.as_deref())?;
    r.record("graph", &inst.label);
    let method = r.get_with("method", a.method, MethodArg::Grad, enum_parser)?;
    let seed = r.get("seed", a.seed, 0u64)?;
    let default_enc = match method {
        MethodArg::Ga => EncodingArg::Step,
        MethodArg::Grad => EncodingArg::Distorted,
    };
    let enc = resolve_encoding(&mut r, &a.encoding, default_enc)?;
    let d = GaConfig::default();
    let ga = resolve_ga(&mut r, &a.ga, d.population_size, d.generations, seed)?;
    let grad = resolve_grad(&mut r, &a.grad, GradConfig::default().max_evals, seed)?;
    let config = r.finish()?;
    let result = match method {
        MethodArg::Ga => solve_ga(&inst.graph, &enc, &ga)?,
        MethodArg::Grad => solve_grad(&inst.graph, &enc, &with_first_phase(grad, &enc))?,
    };

    let l = LaplacianMatrix::build(&inst.graph);
    if a.dump_laplacian {
        out.push_str(&l.to_csv());
    }
    if a.dump_pauli {
        out.push_str(&PauliDecomposition::decompose(&l).to_csv());
    }
    out.push_str(&report::summary(&result));

    let manifest = RunManifest::new("solve", config, seed);
    let json = serde_json::to_string_pretty(&SolveReport::new(
        manifest,
        inst.graph.n_vertices(),
        &result,
    ))?;
    let json_path = suffixed(&a.out, ".json");
    let trace_path = suffixed(&a.out, ".trace.csv");
    fs::write(&json_path, json + "\n")
        .with_context(|| format!("writing {}", json_path.display()))?;
    fs::write(&trace_path, report::trace_csv(&result.cost_trace))
        .with_context(|| format!("writing {}", trace_path.display()))?;
    writeln!(
        out,
        "wrote {} and {}",
        json_path.display(),
        trace_path.display()
    )?;
    Ok(())
}

fn suffixed(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Default budgets by instance size: `(grad max_evals, GA population, GA generations)`.
fn bench_budget(n: usize) -> (usize, usize, usize) {
    match n {
        0..=50 => (250, 20, 20),
        51..=128 => (500, 20, 25),
        _ => (750, 25, 30),
    }
}

fn cmd_bench(a: BenchArgs, out: &mut String) -> Result<()> {
    let mut instances = Vec::new();
    for chunk in a.gnp.chunks(3) {
        instances.push(gnp_instance(chunk)?);
    }
    for path in &a.graph {
        instances.push(file_instance(path)?);
    }

    let mut rows = vec![BENCH_HEADER.to_string()];
    let mut base = Resolver::load(a.config.as_deref())?;
    // validate the config once against every key a run may ask for
    {
        let (evals, pop, gens) = bench_budget(0);
        base.get("seed", a.seed, 0u64)?;
        resolve_grad(&mut base, &a.grad, evals, 0)?;
        resolve_ga(&mut base, &a.ga, pop, gens, 0)?;
    }
    base.finish()?;

    for inst in &instances {
        let n = inst.graph.n_vertices();
        let (evals, pop, gens) = bench_budget(n);
        let mut r = Resolver::load(a.config.as_deref())?;
        let seed = r.get("seed", a.seed, inst.seed.unwrap_or(0))?;
        let grad_cfg = resolve_grad(&mut r, &a.grad, evals, seed)?;
        let ga_cfg = resolve_ga(&mut r, &a.ga, pop, gens, seed)?;
        let distorted = EncodingSpec::distorted(DEFAULT_LAMBDA, DEFAULT_KAPPA, DEFAULT_GAMMA)?;

        for method in [MethodArg::Grad, MethodArg::Ga] {
            let start = Instant::now();
            let result = match method {
                MethodArg::Grad => solve_grad(&inst.graph, &distorted, &grad_cfg),
                MethodArg::Ga => solve_ga(&inst.graph, &EncodingSpec::step(), &ga_cfg),
            };
            let result = result.with_context(|| format!("instance {}", inst.label))?;
            let row = BenchRow {
                instance: &inst.label,
                n,
                density: inst.density,
                seed,
                result: &result,
                wall_ms: start.elapsed().as_millis(),
            };
            rows.push(row.to_csv());
        }
    }
    let csv = rows.join("\n") + "\n";
    match &a.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.push_str(&csv),
    }
    Ok(())
}

fn cmd_oracle(a: OracleArgs, out: &mut String) -> Result<()> {
    let inst = load(&a.source)?;
    let best = brute_force_maxcut(&inst.graph)?;
    writeln!(out, "{}", best.value)?;
    if a.assignment {
        let xs: Vec<String> = best.assignment.iter().map(i8::to_string).collect();
        writeln!(out, "{}", xs.join(","))?;
    }
    Ok(())
}

fn cmd_analytic(a: AnalyticArgs, out: &mut String) -> Result<()> {
    let mut r = Resolver::default();
    let enc = resolve_encoding(&mut r, &a.encoding, EncodingArg::Sigmoid)?;
    let mut req = SliceRequest::new(a.alpha, a.beta, enc);
    req.grid = ThetaGrid::over_domain_with(&enc, a.points);
    let points = slice(&req)?;
    let lambda = if enc.lambda.is_finite() {
        enc.lambda.to_string()
    } else {
        "inf".into()
    };
    let mut csv = format!(
        "# manifest encoding={} lambda={} kappa={} gamma={} alpha={} beta={} points={} version={}\n",
        enc.kind.name(),
        lambda,
        enc.kappa,
        enc.gamma,
        a.alpha,
        a.beta,
        a.points,
        env!("CARGO_PKG_VERSION"),
    );
    csv.push_str(&slice_csv(&points));
    match &a.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.push_str(&csv),
    }
    Ok(())
}

fn cmd_dump(a: DumpArgs, out: &mut String) -> Result<()> {
    let inst = load(&a.source)?;
    let l = LaplacianMatrix::build(&inst.graph);
    match a.what {
        DumpWhat::Laplacian => out.push_str(&l.to_csv()),
        DumpWhat::Pauli => out.push_str(&PauliDecomposition::decompose(&l).to_csv()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_follow_instance_size() {
        assert_eq!(bench_budget(4), (250, 20, 20));
        assert_eq!(bench_budget(50), (250, 20, 20));
        assert_eq!(bench_budget(128), (500, 20, 25));
        assert_eq!(bench_budget(256), (750, 25, 30));
    }

    #[test]
    fn gnp_arguments_are_checked() {
        let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(parse_gnp(&v(&["50", "0.3", "7"])).unwrap(), (50, 0.3, 7));
        assert!(parse_gnp(&v(&["50", "dense", "7"])).is_err());
        assert!(gnp_instance(&v(&["5", "1.5", "0"])).is_err());
    }

    #[test]
    fn lambda_flag_sets_first_phase() {
        let enc = EncodingSpec::distorted(4.0, 0.2, 0.6).unwrap();
        let cfg = with_first_phase(GradConfig::default(), &enc);
        assert_eq!(cfg.lambda_schedule[0].lambda, 4.0);
        let step = with_first_phase(GradConfig::default(), &EncodingSpec::step());
        assert_eq!(step.lambda_schedule[0].lambda, 5.0);
    }
}
