//! Weighted undirected graphs: the MaxCut problem instance.
//!
//! Edge-list text format:
//!
//! ```text
//! # comment
//! n m
//! u v w
//! ...
//! ```
//!
//! The first non-comment line holds the vertex count `n` and edge count `m`,
//! followed by exactly `m` lines of 0-based endpoints and a real weight.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{Error, Result};

/// An undirected weighted edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// A weighted undirected graph without self-loops or parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, canonicalising every edge to `u < v`.
    ///
    /// Rejects out-of-range endpoints, self-loops, duplicate unordered pairs
    /// and non-finite weights.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v, w) in edges {
            out.push(check_edge(n_vertices, u, v, w, &mut seen).map_err(Error::InvalidGraph)?);
        }
        Ok(Self {
            n_vertices,
            edges: out,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }
}

fn check_edge(
    n: usize,
    u: usize,
    v: usize,
    w: f64,
    seen: &mut HashSet<(usize, usize)>,
) -> std::result::Result<Edge, String> {
    if u >= n || v >= n {
        return Err(format!(
            "vertex index {} out of range for n = {n}",
            u.max(v)
        ));
    }
    if u == v {
        return Err(format!("self-loop at vertex {u}"));
    }
    if !w.is_finite() {
        return Err(format!("non-finite weight {w}"));
    }
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    if !seen.insert((u, v)) {
        return Err(format!("duplicate edge ({u}, {v})"));
    }
    Ok(Edge { u, v, w })
}

/// Parses the edge-list format described in the module docs.
///
/// Errors carry the 1-based line number of the offending line.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing \"n m\" header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(header_line, "header must be \"n m\""));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| parse_err(header_line, "vertex count is not a non-negative integer"))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(header_line, "edge count is not a non-negative integer"))?;
    if n == 0 {
        return Err(parse_err(header_line, "graph needs at least one vertex"));
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        if edges.len() == m {
            return Err(parse_err(line, "more edge lines than declared in header"));
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line, "expected \"u v w\""));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(line, "bad vertex index"))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(line, "bad vertex index"))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(line, "bad weight"))?;
        edges.push(check_edge(n, u, v, w, &mut seen).map_err(|m| parse_err(line, &m))?);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok(Graph {
        n_vertices: n,
        edges,
    })
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Erdős–Rényi `G(n, p)` graph with every edge carrying `weight`.
///
/// The generator is PCG-XSL-RR-128/64 (`rand_pcg::Pcg64`) seeded through
/// `SeedableRng::seed_from_u64(seed)`. Unordered pairs are visited in
/// lexicographic order `(0,1), (0,2), …, (n-2,n-1)` and each consumes exactly
/// one uniform `f64` draw; the pair becomes an edge when the draw is below
/// `density`. The output is therefore a pure function of `(n, density, seed)`.
pub fn gnp_random_graph(n: usize, density: f64, seed: u64, weight: f64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidGraph(
            "graph needs at least one vertex".into(),
        ));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidGraph(format!(
            "density {density} outside [0, 1]"
        )));
    }
    if !weight.is_finite() {
        return Err(Error::InvalidGraph(format!("non-finite weight {weight}")));
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < density {
                edges.push(Edge { u, v, w: weight });
            }
        }
    }
    Ok(Graph {
        n_vertices: n,
        edges,
    })
}

impl fmt::Display for Graph {
    /// Writes the graph back in edge-list format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_vertices, self.edges.len())?;
        for e in &self.edges {
            writeln!(f, "{} {} {}", e.u, e.v, e.w)?;
        }
        Ok(())
    }
}
