//! Undirected simple graphs, their matrix operators and structural summary.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored canonically as `(i, j)` with `i < j`; neighbor lists are
/// kept sorted ascending so every traversal is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from unordered pairs. Reversed duplicates collapse into
    /// one edge; self-loops and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "a graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange(a, b));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in &set {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges: set,
            neighbors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges `(i, j)`, `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self) -> bool {
        self.min_degree() == self.max_degree()
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Errors with [`Error::Disconnected`] unless every vertex is reachable.
    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Two-coloring by BFS over every component.
    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap_or(false);
                for &w in &self.neighbors[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Longest shortest path, by one BFS per vertex. `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn density(&self) -> f64 {
        2.0 * self.edges.len() as f64 / (self.n as f64 * (self.n as f64 - 1.0))
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn summarize(&self) -> TopologySummary {
        let connected = self.is_connected();
        let diameter = if connected { self.diameter() } else { None };
        TopologySummary {
            n: self.n,
            edges: self.edges.len(),
            regular: self.is_regular(),
            bipartite: self.is_bipartite(),
            connected,
            d_min: self.min_degree(),
            d_max: self.max_degree(),
            d_avg: self.average_degree(),
            density: self.density(),
            diameter,
            diameter_error: (!connected)
                .then(|| "diameter undefined on a disconnected graph".to_string()),
        }
    }

    /// Adjacency, degree, Laplacian and normalized Laplacian.
    pub fn operators(&self) -> Result<Operators> {
        let degrees = self.degrees();
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        let n = self.n;
        let mut adjacency = DenseMatrix::zeros(n, n);
        for (i, j) in self.edges() {
            adjacency[(i, j)] = 1.0;
            adjacency[(j, i)] = 1.0;
        }
        let deg: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        let degree = DenseMatrix::from_diagonal(&deg);
        let laplacian = degree.sub(&adjacency)?;

        let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
        let mut normalized = DenseMatrix::identity(n);
        for (i, j) in self.edges() {
            let w = inv_sqrt[i] * inv_sqrt[j];
            normalized[(i, j)] = -w;
            normalized[(j, i)] = -w;
        }
        Ok(Operators {
            adjacency,
            degree,
            laplacian,
            normalized_laplacian: normalized,
        })
    }
}

/// The four standard operators of a graph.
#[derive(Debug, Clone)]
pub struct Operators {
    pub adjacency: DenseMatrix,
    pub degree: DenseMatrix,
    pub laplacian: DenseMatrix,
    pub normalized_laplacian: DenseMatrix,
}

/// Structural metrics reported for each topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologySummary {
    pub n: usize,
    pub edges: usize,
    pub regular: bool,
    pub bipartite: bool,
    pub connected: bool,
    pub d_min: usize,
    pub d_max: usize,
    pub d_avg: f64,
    pub density: f64,
    /// Edge count of the longest shortest path; `None` when disconnected.
    pub diameter: Option<usize>,
    pub diameter_error: Option<String>,
}
