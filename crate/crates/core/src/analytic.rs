//! The 4-vertex model (edges 0-1:3, 0-2:1, 1-2:8, 2-3:4) and its
//! one-parameter landscape slices.
//!
//! Its cost expands to
//!
//! ```text
//! C = 1.5 cos(π[R1-R0]) + 0.5 cos(π[R2-R0]) + 4 cos(π[R2-R1]) + 2 cos(π[R3-R2]) - 8
//! ```
//!
//! and the slice `f_{α,β}(θ0) = 1.5 cos(π[α - R(θ0)]) + 0.5 cos(π[β - R(θ0)])`
//! is the part of `C` that moves with `θ0` when `R1 = α` and `R2 = β` are held.

use std::f64::consts::PI;

use crate::encoding::EncodingSpec;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Edge list of the model graph.
pub const EXAMPLE_EDGES: [(usize, usize, f64); 4] =
    [(0, 1, 3.0), (1, 2, 8.0), (2, 3, 4.0), (0, 2, 1.0)];

pub fn example_graph() -> Graph {
    Graph::new(4, EXAMPLE_EDGES).expect("static example graph is valid")
}

pub fn example_cost(r: [f64; 4]) -> f64 {
    let [r0, r1, r2, r3] = r;
    1.5 * (PI * (r1 - r0)).cos()
        + 0.5 * (PI * (r2 - r0)).cos()
        + 4.0 * (PI * (r2 - r1)).cos()
        + 2.0 * (PI * (r3 - r2)).cos()
        - 8.0
}

pub fn slice_value(alpha: f64, beta: f64, r0: f64) -> f64 {
    1.5 * (PI * (alpha - r0)).cos() + 0.5 * (PI * (beta - r0)).cos()
}

/// Evenly spaced `points` samples over `[start, stop]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ThetaGrid {
    pub const DEFAULT_POINTS: usize = 2001;

    /// `DEFAULT_POINTS` samples over the encoding's parameter box.
    pub fn over_domain(enc: &EncodingSpec) -> Self {
        Self::over_domain_with(enc, Self::DEFAULT_POINTS)
    }

    pub fn over_domain_with(enc: &EncodingSpec, points: usize) -> Self {
        // slices are drawn on the extended box even for step and sigmoid
        let lo = -enc.gamma * PI;
        let hi = (2.0 + enc.gamma) * PI;
        Self {
            start: lo,
            stop: hi,
            points,
        }
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceRequest {
    pub alpha: f64,
    pub beta: f64,
    pub enc: EncodingSpec,
    pub grid: ThetaGrid,
}

impl SliceRequest {
    pub fn new(alpha: f64, beta: f64, enc: EncodingSpec) -> Self {
        Self {
            alpha,
            beta,
            enc,
            grid: ThetaGrid::over_domain(&enc),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) || !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidConfig(format!(
                "alpha and beta must lie in [0, 1], got ({}, {})",
                self.alpha, self.beta
            )));
        }
        if self.grid.points < 2 {
            return Err(Error::InvalidConfig(
                "slice grid needs at least 2 points".into(),
            ));
        }
        let lo = -self.enc.gamma * PI;
        let hi = (2.0 + self.enc.gamma) * PI;
        let eps = 1e-12;
        if self.grid.start < lo - eps
            || self.grid.stop > hi + eps
            || self.grid.start >= self.grid.stop
        {
            return Err(Error::InvalidConfig(format!(
                "grid [{}, {}] must be increasing and within [{lo}, {hi}]",
                self.grid.start, self.grid.stop
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint {
    pub theta0: f64,
    pub f: f64,
}

pub fn slice(req: &SliceRequest) -> Result<Vec<SlicePoint>> {
    req.validate()?;
    Ok((0..req.grid.points)
        .map(|i| {
            let theta0 = req.grid.at(i);
            SlicePoint {
                theta0,
                f: slice_value(req.alpha, req.beta, req.enc.value(theta0)),
            }
        })
        .collect())
}

pub fn slice_csv(points: &[SlicePoint]) -> String {
    let mut out = String::from("theta0,f\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.theta0, p.f));
    }
    out
}

/// A strict discrete local minimum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMinimum {
    pub index: usize,
    pub value: f64,
    /// Height to climb before reaching a strictly lower sample: the smaller
    /// of the two one-sided barriers. Infinite for the global minimum.
    pub depth: f64,
    /// `value - min(values)`.
    pub excess: f64,
}

/// Interior samples lower than both neighbours.
///
/// A minimum counts only if its depth exceeds `threshold`; this drops
/// float-noise ripples on flat plateaus.
pub fn interior_local_minima(values: &[f64], threshold: f64) -> Vec<LocalMinimum> {
    minima(values, threshold, false)
}

/// Like [`interior_local_minima`] but the two end samples also qualify when
/// they are lower than their single neighbour, as box-constrained minima.
pub fn boxed_local_minima(values: &[f64], threshold: f64) -> Vec<LocalMinimum> {
    minima(values, threshold, true)
}

fn minima(values: &[f64], threshold: f64, include_ends: bool) -> Vec<LocalMinimum> {
    let n = values.len();
    if n < 2 {
        return Vec::new();
    }
    let global = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut out = Vec::new();
    for i in 0..n {
        let left_ok = i > 0 && values[i] < values[i - 1];
        let right_ok = i + 1 < n && values[i] < values[i + 1];
        let is_min = match (i == 0, i + 1 == n) {
            (false, false) => left_ok && right_ok,
            (true, _) => include_ends && right_ok,
            (_, true) => include_ends && left_ok,
        };
        if !is_min {
            continue;
        }
        let depth = barrier(values, i, -1).min(barrier(values, i, 1)) - values[i];
        if depth > threshold {
            out.push(LocalMinimum {
                index: i,
                value: values[i],
                depth,
                excess: values[i] - global,
            });
        }
    }
    out
}

/// Maximum value seen walking from `i` in direction `dir` until a sample
/// strictly below `values[i]`; infinite if the walk hits the end first.
fn barrier(values: &[f64], i: usize, dir: isize) -> f64 {
    let mut peak = values[i];
    let mut j = i as isize + dir;
    while j >= 0 && (j as usize) < values.len() {
        let v = values[j as usize];
        if v < values[i] {
            return peak;
        }
        peak = peak.max(v);
        j += dir;
    }
    f64::INFINITY
}

/// Central-difference derivative of a sampled curve on its interior points.
pub fn sampled_derivative(points: &[SlicePoint]) -> Vec<f64> {
    points
        .windows(3)
        .map(|w| (w[2].f - w[0].f) / (w[2].theta0 - w[0].theta0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncodingKind;
    use crate::laplacian::{cut_value, LaplacianMatrix};
    use crate::state::{cost_closed_form, ThetaVector};

    #[test]
    fn cost_examples() {
        assert_eq!(example_cost([0.0, 0.0, 0.0, 0.0]), 0.0);
        assert_eq!(example_cost([0.0, 1.0, 0.0, 1.0]), -15.0);
        assert_eq!(example_cost([0.0, 1.0, 1.0, 0.0]), -8.0);
        let g = example_graph();
        assert_eq!(cut_value(&g, &[1, -1, -1, 1]).unwrap(), 8.0);
    }

    #[test]
    fn corners_match_cut_values() {
        let g = example_graph();
        for mask in 0u8..16 {
            let r: [f64; 4] = std::array::from_fn(|i| f64::from(mask >> i & 1));
            let x: Vec<i8> = r.iter().map(|&b| if b == 0.0 { 1 } else { -1 }).collect();
            assert_eq!(-example_cost(r), cut_value(&g, &x).unwrap());
        }
    }

    #[test]
    fn expansion_matches_closed_form() {
        let l = LaplacianMatrix::build(&example_graph());
        let enc = EncodingSpec::distorted(5.0, 0.2, 0.6).unwrap();
        for k in 0..50 {
            let theta: Vec<f64> = (0..4)
                .map(|z| -1.5 + ((k * 13 + z * 7) % 29) as f64 * 0.33)
                .collect();
            let r: [f64; 4] = std::array::from_fn(|z| enc.value(theta[z]));
            let c = cost_closed_form(&ThetaVector::new(theta).unwrap(), &enc, &l).unwrap();
            assert!((c - example_cost(r)).abs() < 1e-9);
        }
    }

    #[test]
    fn step_slice_is_two_valued() {
        let req = SliceRequest::new(0.0, 0.0, EncodingSpec::step());
        let pts = slice(&req).unwrap();
        assert_eq!(pts.len(), 2001);
        for p in &pts {
            let expected = if EncodingSpec::step().value(p.theta0) == 0.0 {
                2.0
            } else {
                -2.0
            };
            assert_eq!(p.f, expected);
        }
        assert!(pts.iter().any(|p| p.f == 2.0) && pts.iter().any(|p| p.f == -2.0));
    }

    #[test]
    fn steep_sigmoid_has_two_plateaus() {
        let req = SliceRequest::new(0.0, 0.0, EncodingSpec::sigmoid(30.0).unwrap());
        let pts = slice(&req).unwrap();
        for p in &pts {
            if p.theta0 < PI - 0.5 {
                assert!((p.f - 2.0).abs() < 1e-3);
            } else if p.theta0 > PI + 0.5 {
                assert!((p.f + 2.0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn grid_endpoints_exact() {
        let grid = ThetaGrid::over_domain(&EncodingSpec::distorted(5.0, 0.2, 0.6).unwrap());
        assert_eq!(grid.at(0), -0.6 * PI);
        assert_eq!(grid.at(2000), 2.6 * PI);
    }

    #[test]
    fn request_validation() {
        let enc = EncodingSpec::sigmoid(5.0).unwrap();
        assert!(slice(&SliceRequest::new(1.5, 0.0, enc)).is_err());
        let mut req = SliceRequest::new(0.5, 0.5, enc);
        req.grid.points = 1;
        assert!(slice(&req).is_err());
        req.grid = ThetaGrid {
            start: -3.0 * PI,
            stop: PI,
            points: 10,
        };
        assert!(slice(&req).is_err());
        assert_eq!(enc.kind, EncodingKind::Sigmoid);
    }

    #[test]
    fn local_minimum_detection() {
        let v = [3.0, 1.0, 2.0, 0.0, 4.0];
        let mins = interior_local_minima(&v, 1e-6);
        assert_eq!(mins.len(), 2);
        assert_eq!(mins[0].index, 1);
        assert_eq!(mins[0].depth, 1.0); // climb to 2.0 before reaching 0.0
        assert_eq!(mins[0].excess, 1.0);
        assert!(mins[1].depth.is_infinite());

        // flat plateau produces no strict minimum
        assert!(interior_local_minima(&[1.0, 0.0, 0.0, 1.0], 1e-6).is_empty());
        // monotone curve has a boxed minimum at its end only
        let mono = [0.0, 1.0, 2.0];
        assert!(interior_local_minima(&mono, 1e-6).is_empty());
        assert_eq!(boxed_local_minima(&mono, 1e-6)[0].index, 0);
        // ripple below threshold ignored
        assert!(interior_local_minima(&[1.0, 0.5, 0.5 - 1e-9, 0.5, 0.0], 1e-6).is_empty());
    }
}
