//! Finite simple graphs with a canonical ordered arc list.
//!
//! Every undirected edge `{u, v}` contributes two oriented arcs. Edge `j`
//! yields arc `2j = u -> v` and arc `2j + 1 = v -> u`, so arc inversion is
//! the index involution `k ^ 1`. All matrices indexed by arcs inherit this
//! ordering, which keeps every downstream computation reproducible
//! bit-for-bit across runs.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A finite simple graph: no loops, no parallel edges.
///
/// Vertices are `0..n`. Construction validates simplicity and records
/// whether the graph is connected; operations that need connectivity
/// (Betti number, zeta functions) check the flag and error instead of
/// silently working per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    connected: bool,
}

/// One oriented edge, with its position in the canonical arc order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub index: usize,
    pub origin: usize,
    pub terminal: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedGraph("graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::MalformedGraph(format!(
                    "edge {idx} = ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("edge {idx} is a loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::MalformedGraph(format!(
                    "edge {idx} = ({u}, {v}) duplicates an earlier edge"
                )));
            }
        }
        let mut degrees = vec![0usize; n];
        for &(u, v) in edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let connected = connected_component_size(n, edges) == n;
        Ok(Graph { n, edges: edges.to_vec(), degrees, connected })
    }

    /// Cycle graph C_n.
    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges)
    }

    /// Path graph on n vertices (a tree).
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of arcs, |R(G)| = 2m.
    pub fn arc_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// The arc with canonical index `k`.
    pub fn arc(&self, k: usize) -> Arc {
        let (u, v) = self.edges[k / 2];
        let (origin, terminal) = if k % 2 == 0 { (u, v) } else { (v, u) };
        Arc { index: k, origin, terminal }
    }

    /// Index of the inverse arc; an involution without fixed points.
    pub fn arc_inverse(&self, k: usize) -> usize {
        k ^ 1
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.arc_count()).map(|k| self.arc(k))
    }

    /// Betti number r = m - n + 1 of a connected graph.
    pub fn betti_number(&self) -> Result<usize> {
        if !self.connected {
            return Err(Error::NotConnected);
        }
        Ok(self.edge_count() + 1 - self.n)
    }

    /// Adjacency matrix A and diagonal degree matrix D.
    pub fn adjacency_and_degree(&self) -> DegreeData {
        let mut a = DMatrix::<f64>::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        let d = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_iterator(
            self.n,
            self.degrees.iter().map(|&d| d as f64),
        ));
        DegreeData { adjacency: a, degree: d, degrees: self.degrees.clone() }
    }
}

/// Adjacency matrix, degree matrix and per-vertex degrees of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeData {
    /// Symmetric 0/1 matrix with zero diagonal.
    pub adjacency: DMatrix<f64>,
    /// Diagonal matrix with D_ii = deg v_i.
    pub degree: DMatrix<f64>,
    pub degrees: Vec<usize>,
}

fn connected_component_size(n: usize, edges: &[(usize, usize)]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}
