//! Exhaustive MaxCut for small graphs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::cut_value;
use crate::Assignment;

pub const MAX_ORACLE_VERTICES: usize = 24;

/// Masks handled per parallel chunk; the Gray-code walk restarts from an
/// exact cut value at every chunk boundary.
const CHUNK_BITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub assignment: Assignment,
}

/// Enumerates the `2^{n-1}` cuts with vertex 0 fixed to `+1`.
///
/// Vertex `i >= 1` is placed on the `-1` side when bit `i - 1` of the mask is
/// set. Among cuts of equal value the smallest mask wins.
pub fn brute_force_maxcut(g: &Graph) -> Result<OracleResult> {
    let n = g.n_vertices();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge {
            n,
            max: MAX_ORACLE_VERTICES,
        });
    }
    if n == 1 {
        return Ok(OracleResult {
            value: 0.0,
            assignment: vec![1],
        });
    }

    let free = n - 1;
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    let scale = g.edges().iter().map(|e| e.w.abs()).sum::<f64>().max(1.0);
    let tie_tol = 1e-9 * scale;

    let chunk_bits = CHUNK_BITS.min(free);
    let n_chunks = 1u64 << (free - chunk_bits);
    let (value, mask) = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| best_in_chunk(g, &adj, chunk, chunk_bits, tie_tol))
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), |a, b| pick(a, b, tie_tol));

    let assignment = mask_to_assignment(mask, n);
    // recompute from scratch; the walk accumulates rounding
    let exact = cut_value(g, &assignment)?;
    debug_assert!((exact - value).abs() <= 1e-6 * scale);
    Ok(OracleResult {
        value: exact,
        assignment,
    })
}

fn pick(a: (f64, u64), b: (f64, u64), tol: f64) -> (f64, u64) {
    if b.0 > a.0 + tol || ((b.0 - a.0).abs() <= tol && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn mask_to_assignment(mask: u64, n: usize) -> Assignment {
    (0..n)
        .map(|i| {
            if i > 0 && mask >> (i - 1) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// Walks the masks `chunk·2^b .. (chunk+1)·2^b` in Gray order of the low `b` bits.
fn best_in_chunk(
    g: &Graph,
    adj: &[Vec<(usize, f64)>],
    chunk: u64,
    bits: usize,
    tol: f64,
) -> (f64, u64) {
    let n = g.n_vertices();
    let high = chunk << bits;
    let mut mask = high;
    let mut side = mask_to_assignment(mask, n);
    let mut value: f64 = g
        .edges()
        .iter()
        .filter(|e| side[e.u] != side[e.v])
        .map(|e| e.w)
        .sum();
    let mut best = (value, mask);
    for k in 1u64..(1 << bits) {
        let bit = k.trailing_zeros() as usize;
        let v = bit + 1;
        // flipping v: cut edges become uncut and vice versa
        let delta: f64 = adj[v]
            .iter()
            .map(|&(u, w)| if side[u] == side[v] { w } else { -w })
            .sum();
        value += delta;
        side[v] = -side[v];
        mask ^= 1 << bit;
        best = pick(best, (value, mask), tol);
    }
    best
}
