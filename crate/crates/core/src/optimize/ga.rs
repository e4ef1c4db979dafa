use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};
use rand_pcg::Pcg64;

use super::{Method, SolveResult, Tracker};
use crate::encoding::EncodingSpec;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::LaplacianMatrix;

const TOURNAMENT_SIZE: usize = 3;
const MUTATION_SIGMA: f64 = 0.3;

/// Generational GA over real chromosomes `θ ∈ [0, 2π]^{2^N}`.
///
/// Tournament selection, uniform crossover, wrapped Gaussian mutation and
/// elitism. One call budget: `population_size` for the initial population
/// plus `population_size` per generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub elite_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 20,
            generations: 20,
            mutation_rate: 0.1,
            crossover_rate: 0.9,
            elite_count: 1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn budget(&self) -> usize {
        self.population_size * (self.generations + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::InvalidConfig(
                "population_size must be at least 1".into(),
            ));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::InvalidConfig(format!(
                "elite_count ({}) must be below population_size ({})",
                self.elite_count, self.population_size
            )));
        }
        for (name, p) in [
            ("mutation_rate", self.mutation_rate),
            ("crossover_rate", self.crossover_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }
}

pub fn solve_ga(g: &Graph, enc: &EncodingSpec, cfg: &GaConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let l = LaplacianMatrix::build(g);
    let dim = l.dim();
    let mut rng = Pcg64::seed_from_u64(cfg.seed);
    let noise = Normal::new(0.0, MUTATION_SIGMA).expect("constant sigma is valid");
    let mut tracker = Tracker::new(&l);

    let mut pop: Vec<Vec<f64>> = (0..cfg.population_size)
        .map(|_| (0..dim).map(|_| rng.random::<f64>() * TAU).collect())
        .collect();
    let mut fit = tracker.eval_batch(&pop, enc);

    for _ in 0..cfg.generations {
        let mut children = Vec::with_capacity(cfg.population_size);
        while children.len() < cfg.population_size {
            let a = tournament(&fit, &mut rng);
            let b = tournament(&fit, &mut rng);
            let mut child = if rng.random::<f64>() < cfg.crossover_rate {
                pop[a]
                    .iter()
                    .zip(&pop[b])
                    .map(|(&x, &y)| if rng.random::<bool>() { x } else { y })
                    .collect()
            } else {
                pop[a].clone()
            };
            for gene in child.iter_mut() {
                if rng.random::<f64>() < cfg.mutation_rate {
                    *gene = (*gene + noise.sample(&mut rng)).rem_euclid(TAU);
                }
            }
            children.push(child);
        }
        let child_fit = tracker.eval_batch(&children, enc);

        // elites of the old generation displace the worst children
        let elites = ranked(&fit);
        let mut worst = ranked(&child_fit);
        worst.reverse();
        let mut next = children;
        let mut next_fit = child_fit;
        for (&e, &w) in elites.iter().zip(&worst).take(cfg.elite_count) {
            if fit[e] < next_fit[w] {
                next[w] = pop[e].clone();
                next_fit[w] = fit[e];
            }
        }
        pop = next;
        fit = next_fit;
    }

    let best = ranked(&fit)[0];
    tracker.finish(Method::Ga, g, &l, pop.swap_remove(best), *enc)
}

fn tournament(fit: &[f64], rng: &mut Pcg64) -> usize {
    let mut best = rng.random_range(0..fit.len());
    for _ in 1..TOURNAMENT_SIZE {
        let c = rng.random_range(0..fit.len());
        if fit[c] < fit[best] {
            best = c;
        }
    }
    best
}

/// Indices by ascending cost, ties by index.
fn ranked(fit: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fit.len()).collect();
    idx.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(a.cmp(&b)));
    idx
}
