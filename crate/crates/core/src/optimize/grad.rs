use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use super::local::{LocalOptimizer, StopReason};
use super::{Method, SolveResult, Tracker};
use crate::encoding::EncodingSpec;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::LaplacianMatrix;

/// A share of the evaluation budget run at steepness `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPhase {
    pub share: f64,
    pub lambda: f64,
}

/// Multistart plus trust-region refinement with λ annealing.
///
/// When a local run stalls before its phase budget is spent, the annealing
/// phases restart it from the incumbent with `kick_size` random coordinates
/// moved by `π` (flipping their side of the cut) and keep the result only if
/// it improves.
///
/// `max_evals` is split across `lambda_schedule`; whatever share is left
/// runs at `post_lambda`. The trust radius starts at `rhobeg_initial` and is
/// capped at `rhobeg` once a fraction `at` of `max_evals` has been spent,
/// for each `(at, rhobeg)` in `rhobeg_decay`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradConfig {
    pub multistarts: usize,
    pub max_evals: usize,
    pub lambda_schedule: Vec<LambdaPhase>,
    pub rhobeg_initial: f64,
    pub rhobeg_decay: Vec<(f64, f64)>,
    pub rhoend: f64,
    pub post_lambda: f64,
    pub kick_size: usize,
    pub seed: u64,
}

impl Default for GradConfig {
    fn default() -> Self {
        Self {
            multistarts: 8,
            max_evals: 500,
            lambda_schedule: vec![
                LambdaPhase {
                    share: 0.6,
                    lambda: 5.0,
                },
                LambdaPhase {
                    share: 0.3,
                    lambda: 6.0,
                },
            ],
            rhobeg_initial: 3.0,
            rhobeg_decay: vec![(0.9, 0.3)],
            rhoend: 1e-6,
            post_lambda: 30.0,
            kick_size: 6,
            seed: 0,
        }
    }
}

impl GradConfig {
    pub fn budget(&self) -> usize {
        self.multistarts + self.max_evals
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.multistarts == 0 {
            return bad("multistarts must be at least 1".into());
        }
        if self.lambda_schedule.is_empty() {
            return bad("lambda_schedule must not be empty".into());
        }
        let total: f64 = self.lambda_schedule.iter().map(|p| p.share).sum();
        if self.lambda_schedule.iter().any(|p| !(p.share >= 0.0)) || total > 1.0 + 1e-12 {
            return bad(format!(
                "lambda phase shares must be non-negative and sum to at most 1, got {total}"
            ));
        }
        if !(self.rhobeg_initial > 0.0) || !(self.rhoend > 0.0) {
            return bad("rhobeg_initial and rhoend must be positive".into());
        }
        if self
            .rhobeg_decay
            .iter()
            .any(|&(at, r)| !(0.0..=1.0).contains(&at) || !(r > 0.0))
        {
            return bad(
                "rhobeg_decay entries need a fraction in [0, 1] and a positive radius".into(),
            );
        }
        Ok(())
    }

    /// Scheduled `rhobeg` after `spent` of `max_evals` evaluations.
    fn rhobeg_at(&self, spent: usize) -> f64 {
        let mut r = self.rhobeg_initial;
        for &(at, cap) in &self.rhobeg_decay {
            if spent as f64 >= at * self.max_evals as f64 {
                r = r.min(cap);
            }
        }
        r
    }

    /// `(λ, evals)` per phase, post-processing last. Phase boundaries are the
    /// floors of the cumulative shares, so the counts sum to `max_evals`.
    fn phases(&self) -> Vec<(f64, usize)> {
        let mut out = Vec::with_capacity(self.lambda_schedule.len() + 1);
        let mut cum = 0.0;
        let mut start = 0;
        for p in &self.lambda_schedule {
            cum += p.share;
            let end = ((cum * self.max_evals as f64 + 1e-9).floor() as usize).min(self.max_evals);
            out.push((p.lambda, end - start));
            start = end;
        }
        out.push((self.post_lambda, self.max_evals - start));
        out
    }
}

pub fn solve_grad(g: &Graph, enc: &EncodingSpec, cfg: &GradConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let l = LaplacianMatrix::build(g);
    let dim = l.dim();
    let mut tracker = Tracker::new(&l);
    let phases = cfg.phases();

    // multistart: replica i draws from its own stream
    let starts: Vec<Vec<f64>> = (0..cfg.multistarts as u64)
        .map(|i| {
            let mut rng = Pcg64::seed_from_u64(cfg.seed.wrapping_add(i));
            (0..dim).map(|_| rng.random::<f64>() * TAU).collect()
        })
        .collect();
    let first_enc = enc.with_lambda(phases[0].0)?;
    let costs = tracker.eval_batch(&starts, &first_enc);
    let pick = (0..starts.len())
        .min_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)))
        .expect("multistarts >= 1");
    let mut x = starts[pick].clone();
    let mut fx = Some(costs[pick]);

    let (lo, hi) = enc.domain();
    let bounds = vec![(lo, hi); dim];
    // stream for perturbation restarts, next after the multistart replicas
    let mut kick_rng = Pcg64::seed_from_u64(cfg.seed.wrapping_add(cfg.multistarts as u64));
    let mut spent = 0usize;
    let mut final_enc = first_enc;
    let last = phases.len() - 1;
    for (k, &(lambda, evals)) in phases.iter().enumerate() {
        let phase_enc = enc.with_lambda(lambda)?;
        final_enc = phase_enc;
        if k > 0 {
            fx = None;
        }
        let phase_end = spent + evals;
        let mut stale = 0usize;
        while spent < phase_end {
            if fx.is_none() {
                fx = Some(tracker.eval(&x, &phase_enc));
                spent += 1;
                continue;
            }
            let best = fx.expect("set above");
            // annealing phases escape stalls by perturbation; the final
            // phase only refines
            let kicked = stale > 0 && k < last && cfg.kick_size > 0;
            let (start, f_start) = if kicked {
                (kick(&x, cfg.kick_size, &mut kick_rng), None)
            } else {
                (x.clone(), Some(best))
            };
            let rhobeg = cfg.rhobeg_at(spent);
            let caps: Vec<(usize, f64)> = cfg
                .rhobeg_decay
                .iter()
                .map(|&(at, r)| {
                    let at = (at * cfg.max_evals as f64).ceil() as usize;
                    (at.saturating_sub(spent), r)
                })
                .filter(|&(_, r)| r < rhobeg)
                .collect();
            let opt = LocalOptimizer::new(rhobeg, cfg.rhoend, phase_end - spent)
                .downward_first(stale % 2 == 1);
            let out = opt.minimize_capped(
                |t: &[f64]| tracker.eval(t, &phase_enc),
                &start,
                f_start,
                &bounds,
                &caps,
            )?;
            spent += out.evals;
            if out.evals == 0 {
                break;
            }
            if out.fx < best {
                x = out.x;
                fx = Some(out.fx);
                stale = 0;
            } else {
                stale += 1;
            }
            if out.stop == StopReason::Budget || (!kicked && k == last && stale >= 2) {
                break;
            }
        }
        spent = spent.max(phase_end).min(cfg.max_evals);
    }

    tracker.finish(Method::Grad, g, &l, x, final_enc)
}

/// Copy of `x` with `size` distinct random coordinates shifted by `π`
/// modulo `2π`, which carries a plateau point to the opposite plateau.
fn kick(x: &[f64], size: usize, rng: &mut Pcg64) -> Vec<f64> {
    let mut out = x.to_vec();
    for z in rand::seq::index::sample(rng, x.len(), size.min(x.len())) {
        out[z] = (out[z] + PI).rem_euclid(TAU);
    }
    out
}
