//! Derivative-free trust-region minimisation with linear interpolation models.
//!
//! This is the unconstrained core of Powell's COBYLA, with simple bounds
//! handled exactly in the step computation. The method keeps a simplex of
//! `n + 1` points: the best point `x0` plus `n` vertices stored as
//! displacements `s_j`. The linear model through the simplex has gradient
//! `g = S⁻¹ Δf`; each iteration either
//!
//! - replaces a badly placed vertex to keep the simplex well conditioned, or
//! - moves to the minimiser of the model inside the ball of radius `ρ`
//!   intersected with the box, then swaps that point into the simplex.
//!
//! `ρ` starts at `rhobeg` and is halved whenever the model stops predicting
//! progress on an acceptable simplex, down to `rhoend`. Large `rhobeg` lets
//! the early iterations stride across shallow barriers.

use crate::error::{Error, Result};

/// Fraction of `ρ` below which a vertex is too close to the opposite face.
const SIGMA_FACTOR: f64 = 0.25;
/// Multiple of `ρ` above which a vertex is too far from `x0`.
const ETA_FACTOR: f64 = 2.1;
/// Length of a geometry-improving step, as a fraction of `ρ`.
const GEOMETRY_STEP: f64 = 0.5;
/// Vertices farther than this multiple of `ρ` are preferred for replacement.
const FAR_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalOptimizer {
    pub rhobeg: f64,
    pub rhoend: f64,
    pub max_evals: usize,
    /// Build the initial simplex with `-rhobeg` steps where the box allows.
    pub downward_first: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Trust radius reached `rhoend`.
    Converged,
    /// Evaluation budget used up.
    Budget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOutcome {
    pub x: Vec<f64>,
    /// Objective at `x`; NaN when no evaluation was made.
    pub fx: f64,
    pub evals: usize,
    pub stop: StopReason,
}

/// Functional form: minimise `objective` from `x0` within `bounds`.
pub fn local_optimizer<F>(
    objective: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    rhobeg: f64,
    max_evals: usize,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> f64,
{
    let opt = LocalOptimizer {
        rhobeg,
        rhoend: 1e-6,
        max_evals,
        downward_first: false,
    };
    let out = opt.minimize(objective, x0, None, bounds)?;
    Ok((out.x, out.fx))
}

impl LocalOptimizer {
    pub fn new(rhobeg: f64, rhoend: f64, max_evals: usize) -> Self {
        Self {
            rhobeg,
            rhoend,
            max_evals,
            downward_first: false,
        }
    }

    pub fn downward_first(self, on: bool) -> Self {
        Self {
            downward_first: on,
            ..self
        }
    }

    /// Minimises `objective` starting from `x0`, clamped into `bounds`.
    ///
    /// `fx0` may carry an already known objective value at `x0` to save one
    /// evaluation. The returned point never has a larger objective than `x0`.
    pub fn minimize<F>(
        &self,
        objective: F,
        x0: &[f64],
        fx0: Option<f64>,
        bounds: &[(f64, f64)],
    ) -> Result<LocalOutcome>
    where
        F: FnMut(&[f64]) -> f64,
    {
        self.minimize_capped(objective, x0, fx0, bounds, &[])
    }

    /// As [`minimize`](Self::minimize), with the trust radius capped at
    /// `cap` once `at` evaluations have been spent, for each `(at, cap)`.
    pub fn minimize_capped<F>(
        &self,
        mut objective: F,
        x0: &[f64],
        fx0: Option<f64>,
        bounds: &[(f64, f64)],
        caps: &[(usize, f64)],
    ) -> Result<LocalOutcome>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        if bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bounds.len(),
            });
        }
        if !(self.rhobeg > 0.0) || !(self.rhoend > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "trust radii must be positive, got rhobeg = {}, rhoend = {}",
                self.rhobeg, self.rhoend
            )));
        }
        if bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
            return Err(Error::InvalidConfig("empty bound interval".into()));
        }
        let x: Vec<f64> = x0
            .iter()
            .zip(bounds)
            .map(|(&v, &(lo, hi))| v.clamp(lo, hi))
            .collect();

        let mut run = Run {
            objective: &mut objective,
            bounds,
            evals: 0,
            max_evals: self.max_evals,
            best: None,
        };
        let fx = match fx0 {
            Some(v) => v,
            None => match run.eval(&x)? {
                Some(v) => v,
                None => {
                    return Ok(LocalOutcome {
                        x,
                        fx: f64::NAN,
                        evals: 0,
                        stop: StopReason::Budget,
                    })
                }
            },
        };
        let mut simplex = Simplex::new(x, fx);
        let stop = self.iterate(&mut run, &mut simplex, caps)?;
        simplex.promote_best();
        let (x, fx) = match run.best.take() {
            // a trial point evaluated just before the budget ran out
            Some((bx, bf)) if bf < simplex.f_base => (bx, bf),
            _ => (simplex.base, simplex.f_base),
        };
        Ok(LocalOutcome {
            x,
            fx,
            evals: run.evals,
            stop,
        })
    }

    fn iterate<F>(
        &self,
        run: &mut Run<'_, F>,
        s: &mut Simplex,
        caps: &[(usize, f64)],
    ) -> Result<StopReason>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = s.base.len();
        if n == 0 {
            return Ok(StopReason::Converged);
        }
        let mut rho = self.rhobeg.max(self.rhoend);

        // initial simplex along the coordinate axes, moving the base whenever
        // a probe improves on it
        for j in 0..n {
            let (lo, hi) = run.bounds[j];
            let room_up = hi - s.base[j];
            let room_down = s.base[j] - lo;
            let step = if self.downward_first && room_down >= rho {
                -rho
            } else if room_up >= rho {
                rho
            } else if room_down >= rho {
                -rho
            } else if room_up >= room_down {
                room_up
            } else {
                -room_down
            };
            if step == 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "bound interval {j} has zero width"
                )));
            }
            let mut p = s.base.clone();
            p[j] += step;
            let Some(fp) = run.eval(&p)? else {
                s.truncate(j);
                return Ok(StopReason::Budget);
            };
            s.push_axis_vertex(j, step, fp);
        }

        let mut poor_step = false;
        let mut repairs = 0usize;
        loop {
            for &(at, cap) in caps {
                if run.evals >= at && rho > cap {
                    rho = cap.max(self.rhoend);
                }
            }
            s.promote_best();
            let grad = s.model_gradient();

            if let Some((j, far)) = s.vertex_to_improve(rho).filter(|_| repairs <= 2 * n) {
                repairs += 1;
                if let Some(d) = geometry_step(s, j, &grad, rho, far, run.bounds) {
                    let p = s.point(&d);
                    let Some(fp) = run.eval(&p)? else {
                        return Ok(StopReason::Budget);
                    };
                    s.replace(j, d, fp);
                    continue;
                }
                // the box leaves no better placement; fall through to a model step
            }

            repairs = 0;
            if poor_step {
                poor_step = false;
                if !self.shrink(&mut rho) {
                    return Ok(StopReason::Converged);
                }
                continue;
            }

            let d = trust_region_step(&s.base, &grad, rho, run.bounds);
            let step_len = norm(&d);
            if step_len < 0.5 * rho {
                if !self.shrink(&mut rho) {
                    return Ok(StopReason::Converged);
                }
                continue;
            }
            let predicted = -dot(&grad, &d);
            let p = s.point(&d);
            let Some(fp) = run.eval(&p)? else {
                return Ok(StopReason::Budget);
            };
            let actual = s.f_base - fp;
            if let Some(j) = s.vertex_to_drop(&d, actual > 0.0, rho) {
                s.replace(j, d, fp);
            } else if fp < s.f_base {
                // degenerate replacement; still move to the better point
                s.rebase_to(p, fp, rho);
            }
            poor_step = predicted <= 0.0 || actual < 0.1 * predicted;
        }
    }

    /// Halves `ρ`, snapping to `rhoend`; false once `ρ` is already at `rhoend`.
    fn shrink(&self, rho: &mut f64) -> bool {
        if *rho <= self.rhoend {
            return false;
        }
        *rho *= 0.5;
        if *rho <= 1.5 * self.rhoend {
            *rho = self.rhoend;
        }
        true
    }
}

struct Run<'a, F> {
    objective: &'a mut F,
    bounds: &'a [(f64, f64)],
    evals: usize,
    max_evals: usize,
    best: Option<(Vec<f64>, f64)>,
}

impl<F: FnMut(&[f64]) -> f64> Run<'_, F> {
    /// `None` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.evals >= self.max_evals {
            return Ok(None);
        }
        self.evals += 1;
        let v = (self.objective)(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective {
                eval: self.evals,
                value: v,
            });
        }
        if self.best.as_ref().is_none_or(|(_, b)| v < *b) {
            self.best = Some((x.to_vec(), v));
        }
        Ok(Some(v))
    }
}

/// Simplex `{x0} ∪ {x0 + s_j}` with the inverse `A = S⁻¹` of the
/// displacement matrix (rows `s_j`), so `S A = I` and column `j` of `A` is
/// normal to the face opposite vertex `j`.
struct Simplex {
    base: Vec<f64>,
    f_base: f64,
    disp: Vec<Vec<f64>>,
    fvals: Vec<f64>,
    /// `inv[i][j]` = `A[i][j]`
    inv: Vec<Vec<f64>>,
}

impl Simplex {
    fn new(base: Vec<f64>, f_base: f64) -> Self {
        let n = base.len();
        Self {
            base,
            f_base,
            disp: Vec::with_capacity(n),
            fvals: Vec::with_capacity(n),
            inv: vec![vec![0.0; n]; n],
        }
    }

    fn point(&self, d: &[f64]) -> Vec<f64> {
        self.base.iter().zip(d).map(|(b, d)| b + d).collect()
    }

    /// Adds vertex `j` at `base + step·e_j` during initialisation. If it
    /// beats the base, the two trade places.
    fn push_axis_vertex(&mut self, j: usize, step: f64, fp: f64) {
        let n = self.base.len();
        let mut d = vec![0.0; n];
        d[j] = step;
        if fp < self.f_base {
            // new base at base + step e_j; old base sits at -step e_j, and
            // earlier vertices shift by -step e_j
            self.base[j] += step;
            for dk in self.disp.iter_mut() {
                dk[j] -= step;
            }
            d[j] = -step;
            self.disp.push(d);
            self.fvals.push(self.f_base);
            self.f_base = fp;
            self.recompute_inverse_initial();
        } else {
            self.disp.push(d);
            self.fvals.push(fp);
            self.recompute_inverse_initial();
        }
    }

    /// Inverts the leading `m×m` block of `S` while the simplex is being
    /// built; entries of `S` outside it are zero.
    fn recompute_inverse_initial(&mut self) {
        let m = self.disp.len();
        let n = self.base.len();
        let mut a = vec![vec![0.0; 2 * m]; m];
        for r in 0..m {
            for c in 0..m {
                a[r][c] = self.disp[r][c];
            }
            a[r][m + r] = 1.0;
        }
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r][col];
                    if f != 0.0 {
                        for c in 0..2 * m {
                            a[r][c] -= f * a[col][c];
                        }
                    }
                }
            }
        }
        // a[.., m..] = S⁻¹ (m×m)
        for i in 0..n {
            for j in 0..n {
                self.inv[i][j] = if i < m && j < m { a[i][m + j] } else { 0.0 };
            }
        }
    }

    /// Drops vertices `j..` after a budget cut during initialisation.
    fn truncate(&mut self, j: usize) {
        self.disp.truncate(j);
        self.fvals.truncate(j);
    }

    fn n(&self) -> usize {
        self.base.len()
    }

    /// Swaps the best vertex into the base position.
    fn promote_best(&mut self) {
        if self.disp.len() < self.n() {
            return;
        }
        let Some((l, &fl)) = self
            .fvals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
        else {
            return;
        };
        if fl >= self.f_base {
            return;
        }
        let n = self.n();
        let sl = self.disp[l].clone();
        for i in 0..n {
            self.base[i] += sl[i];
        }
        for (j, dj) in self.disp.iter_mut().enumerate() {
            if j == l {
                for v in dj.iter_mut() {
                    *v = -*v;
                }
            } else {
                for (v, s) in dj.iter_mut().zip(&sl) {
                    *v -= s;
                }
            }
        }
        // A' = A T: column l becomes -Σ_k A[:,k], others unchanged
        for row in self.inv.iter_mut() {
            let sum: f64 = row.iter().sum();
            row[l] = -sum;
        }
        self.fvals[l] = self.f_base;
        self.f_base = fl;
    }

    fn model_gradient(&self) -> Vec<f64> {
        let df: Vec<f64> = self.fvals.iter().map(|f| f - self.f_base).collect();
        self.inv.iter().map(|row| dot(row, &df)).collect()
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.inv.iter().map(|row| row[j]).collect()
    }

    /// Vertex whose distance from the base exceeds `2.1ρ` (flagged `true`),
    /// or failing that whose distance from the opposite face is below `0.25ρ`.
    fn vertex_to_improve(&self, rho: f64) -> Option<(usize, bool)> {
        let (far, eta) = (0..self.n())
            .map(|j| (j, norm(&self.disp[j])))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if eta > ETA_FACTOR * rho {
            return Some((far, true));
        }
        let (flat, sigma) = (0..self.n())
            .map(|j| (j, 1.0 / norm(&self.column(j))))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (sigma < SIGMA_FACTOR * rho).then_some((flat, false))
    }

    /// Vertex to swap out for the trial point `base + d`.
    fn vertex_to_drop(&self, d: &[f64], improved: bool, rho: f64) -> Option<usize> {
        let n = self.n();
        let t: Vec<f64> = (0..n).map(|j| dot(d, &self.column(j)).abs()).collect();
        let mut best = if improved { 0.0 } else { 1.0 };
        let mut jdrop = None;
        for (j, &tj) in t.iter().enumerate() {
            if tj > best {
                best = tj;
                jdrop = Some(j);
            }
        }
        let parsig = SIGMA_FACTOR * rho;
        let mut edge = FAR_FACTOR * rho;
        let mut far = None;
        for j in 0..n {
            let vsig = 1.0 / norm(&self.column(j));
            let sigbar = t[j] * vsig;
            if sigbar >= parsig || sigbar >= vsig {
                let dist = if improved {
                    norm(
                        &d.iter()
                            .zip(&self.disp[j])
                            .map(|(a, b)| a - b)
                            .collect::<Vec<_>>(),
                    )
                } else {
                    norm(&self.disp[j])
                };
                if dist > edge {
                    edge = dist;
                    far = Some(j);
                }
            }
        }
        // keep the update numerically safe
        far.or(jdrop).filter(|&j| t[j] > 1e-12)
    }

    /// Replaces vertex `j` by `base + d` and updates `A` (Sherman–Morrison).
    fn replace(&mut self, j: usize, d: Vec<f64>, fd: f64) {
        let n = self.n();
        let col_j = self.column(j);
        let tj = dot(&d, &col_j);
        // dᵀA for every column
        let da: Vec<f64> = (0..n)
            .map(|k| (0..n).map(|i| d[i] * self.inv[i][k]).sum())
            .collect();
        for i in 0..n {
            for k in 0..n {
                if k == j {
                    self.inv[i][k] = col_j[i] / tj;
                } else {
                    self.inv[i][k] -= col_j[i] * da[k] / tj;
                }
            }
        }
        self.disp[j] = d;
        self.fvals[j] = fd;
    }

    /// Restarts the simplex around a better point that could not be swapped in.
    fn rebase_to(&mut self, p: Vec<f64>, fp: f64, rho: f64) {
        let n = self.n();
        let shift: Vec<f64> = p.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        // old base becomes a vertex in place of the farthest one
        let far = (0..n)
            .max_by(|&a, &b| norm(&self.disp[a]).total_cmp(&norm(&self.disp[b])))
            .unwrap_or(0);
        let _ = rho;
        let mut new_disp: Vec<Vec<f64>> = self
            .disp
            .iter()
            .map(|dj| dj.iter().zip(&shift).map(|(a, s)| a - s).collect())
            .collect();
        new_disp[far] = shift.iter().map(|s| -s).collect();
        let f_old = self.f_base;
        self.fvals[far] = f_old;
        self.base = p;
        self.f_base = fp;
        self.disp = new_disp;
        self.recompute_inverse_full();
    }

    fn recompute_inverse_full(&mut self) {
        let n = self.n();
        let mut a = vec![vec![0.0; 2 * n]; n];
        for r in 0..n {
            a[r][..n].copy_from_slice(&self.disp[r]);
            a[r][n + r] = 1.0;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            a.swap(col, piv);
            let p = a[col][col];
            if p == 0.0 {
                continue;
            }
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r][col];
                    if f != 0.0 {
                        for c in 0..2 * n {
                            a[r][c] -= f * a[col][c];
                        }
                    }
                }
            }
        }
        for i in 0..n {
            self.inv[i].copy_from_slice(&a[i][n..]);
        }
    }
}

/// Replacement for vertex `j` that raises its height above the opposite
/// face. Candidates are `±GEOMETRY_STEP·ρ` along the face normal and along
/// each axis, clipped to the box; the tallest wins, ties going to the one
/// that decreases the linear model. A flat vertex must gain height; a far
/// one only needs a nondegenerate replacement.
fn geometry_step(
    s: &Simplex,
    j: usize,
    grad: &[f64],
    rho: f64,
    far: bool,
    bounds: &[(f64, f64)],
) -> Option<Vec<f64>> {
    let n = s.n();
    let col = s.column(j);
    let cn = norm(&col);
    let len = GEOMETRY_STEP * rho;
    let current = 1.0 / cn;
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(2 * n + 2);
    let normal: Vec<f64> = col.iter().map(|c| len * c / cn).collect();
    dirs.push(normal.iter().map(|v| -v).collect());
    dirs.push(normal);
    for i in 0..n {
        for sign in [len, -len] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            dirs.push(e);
        }
    }
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for d in dirs {
        let cand: Vec<f64> = d
            .iter()
            .zip(&s.base)
            .zip(bounds)
            .map(|((&di, &b), &(lo, hi))| (b + di).clamp(lo, hi) - b)
            .collect();
        let height = dot(&cand, &col).abs() / cn;
        let slope = dot(grad, &cand);
        let better = match &best {
            None => true,
            Some((h, sl, _)) => {
                height > h * (1.0 + 1e-9) || (height >= h * (1.0 - 1e-9) && slope < *sl)
            }
        };
        if better {
            best = Some((height, slope, cand));
        }
    }
    best.filter(|(h, _, _)| *h >= 0.1 * len && (far || *h > 1.1 * current))
        .map(|(_, _, d)| d)
}

/// Minimiser of `gᵀd` over `‖d‖ <= ρ` and `lo <= base + d <= hi`.
///
/// The solution is `d(t) = clip(-t g)` for the smallest `t` with `‖d(t)‖ = ρ`
/// (or the fully clipped step if that is shorter), found by bisection.
fn trust_region_step(base: &[f64], grad: &[f64], rho: f64, bounds: &[(f64, f64)]) -> Vec<f64> {
    let clip = |t: f64| -> Vec<f64> {
        base.iter()
            .zip(grad)
            .zip(bounds)
            .map(|((&b, &g), &(lo, hi))| (-t * g).clamp(lo - b, hi - b))
            .collect()
    };
    let gn = norm(grad);
    if gn == 0.0 || !gn.is_finite() {
        return vec![0.0; base.len()];
    }
    let full: Vec<f64> = base
        .iter()
        .zip(grad)
        .zip(bounds)
        .map(|((&b, &g), &(lo, hi))| {
            if g > 0.0 {
                lo - b
            } else if g < 0.0 {
                hi - b
            } else {
                0.0
            }
        })
        .collect();
    if norm(&full) <= rho {
        return full;
    }
    let mut hi_t = rho / gn;
    while norm(&clip(hi_t)) < rho {
        hi_t *= 2.0;
    }
    let mut lo_t = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo_t + hi_t);
        if norm(&clip(mid)) < rho {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    clip(hi_t)
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
