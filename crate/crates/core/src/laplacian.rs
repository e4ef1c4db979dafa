//! Graph Laplacian, zero-padded to a power-of-two dimension.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of qubits needed for `n` vertices: `⌈log2 n⌉`, and 1 for `n <= 2`.
pub fn qubits_for(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Dense symmetric Laplacian of dimension `2^N`.
///
/// Rows and columns with index `>= n_original` are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    dim: usize,
    n_original: usize,
    entries: Vec<f64>,
}

impl LaplacianMatrix {
    /// Builds the padded Laplacian: weighted degrees on the diagonal,
    /// `-w_ij` off the diagonal for every edge.
    pub fn build(g: &Graph) -> Self {
        let n = g.n_vertices();
        let dim = 1usize << qubits_for(n);
        let mut entries = vec![0.0; dim * dim];
        for e in g.edges() {
            entries[e.u * dim + e.u] += e.w;
            entries[e.v * dim + e.v] += e.w;
            entries[e.u * dim + e.v] -= e.w;
            entries[e.v * dim + e.u] -= e.w;
        }
        Self {
            dim,
            n_original: n,
            entries,
        }
    }

    /// Wraps an arbitrary symmetric matrix (used for decomposition tests).
    pub fn from_dense(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "matrix dimension {dim} is not a power of two >= 2"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::InvalidConfig(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            n_original: dim,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn n_original(&self) -> usize {
        self.n_original
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Nonzero strictly-upper-triangular entries as `(row, col, value)`.
    pub fn off_diagonal(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// `(1/4) xᵀ L x` over the first `n_original` coordinates.
    pub fn quarter_quadratic_form(&self, x: &[i8]) -> Result<f64> {
        check_assignment(x, self.n_original)?;
        let mut acc = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let row = self.row(i);
            let inner: f64 = x.iter().zip(row).map(|(&xj, &l)| f64::from(xj) * l).sum();
            acc += f64::from(xi) * inner;
        }
        Ok(acc / 4.0)
    }

    /// CSV rendering, one row per line, shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn check_assignment(x: &[i8], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
        return Err(Error::InvalidAssignment { index, value });
    }
    Ok(())
}

/// Total weight of edges whose endpoints fall on different sides of `x`.
pub fn cut_value(g: &Graph, x: &[i8]) -> Result<f64> {
    check_assignment(x, g.n_vertices())?;
    Ok(g.edges()
        .iter()
        .filter(|e| x[e.u] != x[e.v])
        .map(|e| e.w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_random_graph, parse_edge_list};

    fn four_vertex() -> Graph {
        parse_edge_list("4 4\n0 1 3\n1 2 8\n2 3 4\n0 2 1").unwrap()
    }

    #[test]
    fn qubit_counts() {
        let cases = [
            (1, 1),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 3),
            (8, 3),
            (9, 4),
            (50, 6),
            (128, 7),
            (129, 8),
            (256, 8),
        ];
        for (n, q) in cases {
            assert_eq!(qubits_for(n), q, "n = {n}");
        }
    }

    #[test]
    fn four_vertex_laplacian() {
        let l = LaplacianMatrix::build(&four_vertex());
        let expected = [
            4.0, -3.0, -1.0, 0.0, //
            -3.0, 11.0, -8.0, 0.0, //
            -1.0, -8.0, 13.0, -4.0, //
            0.0, 0.0, -4.0, 4.0,
        ];
        assert_eq!(l.as_slice(), &expected);
        assert_eq!(l.n_qubits(), 2);
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(0, 1, 2.5)]).unwrap();
        let l = LaplacianMatrix::build(&g);
        assert_eq!(l.as_slice(), &[2.5, -2.5, -2.5, 2.5]);
    }

    #[test]
    fn path_is_padded() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let l = LaplacianMatrix::build(&g);
        assert_eq!(l.dim(), 4);
        assert_eq!(l.row(0), &[1.0, -1.0, 0.0, 0.0]);
        assert_eq!(l.row(1), &[-1.0, 2.0, -1.0, 0.0]);
        assert_eq!(l.row(2), &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(l.row(3), &[0.0; 4]);
        assert!((0..4).all(|i| l.get(i, 3) == 0.0));
    }

    #[test]
    fn single_vertex_uses_one_qubit() {
        let l = LaplacianMatrix::build(&Graph::new(1, []).unwrap());
        assert_eq!(l.dim(), 2);
        assert!(l.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_invariants_on_random_graphs() {
        for seed in 0..20 {
            let g = gnp_random_graph(11, 0.4, seed, 1.5).unwrap();
            let l = LaplacianMatrix::build(&g);
            for i in 0..l.dim() {
                for j in 0..l.dim() {
                    assert_eq!(l.get(i, j), l.get(j, i));
                }
                if i < 11 {
                    assert!(l.row(i).iter().sum::<f64>().abs() < 1e-12);
                    let deg: f64 = g
                        .edges()
                        .iter()
                        .filter(|e| e.u == i || e.v == i)
                        .map(|e| e.w)
                        .sum();
                    assert_eq!(l.get(i, i), deg);
                } else {
                    assert!(l.row(i).iter().all(|&v| v == 0.0));
                }
            }
        }
    }

    #[test]
    fn cut_values_on_example() {
        let g = four_vertex();
        assert_eq!(cut_value(&g, &[1, -1, 1, -1]).unwrap(), 15.0);
        assert_eq!(cut_value(&g, &[1, 1, 1, 1]).unwrap(), 0.0);
        assert_eq!(cut_value(&g, &[1, 1, -1, -1]).unwrap(), 9.0);
        assert!(matches!(
            cut_value(&g, &[1, 1, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            cut_value(&g, &[1, 0, 1, 1]),
            Err(Error::InvalidAssignment { index: 1, .. })
        ));
    }

    #[test]
    fn quadratic_form_matches_edge_sum_exhaustively() {
        for seed in 0..10 {
            let g = gnp_random_graph(9, 0.5, seed, 1.0).unwrap();
            let l = LaplacianMatrix::build(&g);
            for mask in 0u32..(1 << 9) {
                let x: Vec<i8> = (0..9)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                let q = l.quarter_quadratic_form(&x).unwrap();
                let edge_sum: f64 = g
                    .edges()
                    .iter()
                    .map(|e| e.w * (1.0 - f64::from(x[e.u] * x[e.v])) / 2.0)
                    .sum();
                assert!((q - edge_sum).abs() < 1e-9);
                assert!((q - cut_value(&g, &x).unwrap()).abs() < 1e-9);
                assert!(q >= -1e-12);
            }
        }
    }
}
