//! Benchmark topologies.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    Graph::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
}

/// Vertex `i` is joined to `(i ± s) mod n` for every offset `s`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "circulant graph needs n >= 3, got {n}"
        )));
    }
    if offsets.is_empty() {
        return Err(Error::InvalidParameter(
            "circulant graph needs at least one offset".into(),
        ));
    }
    for (k, &s) in offsets.iter().enumerate() {
        // 1 <= s < n/2 + 1, i.e. 2s < n + 2
        if s == 0 || 2 * s >= n + 2 {
            return Err(Error::InvalidParameter(format!(
                "circulant offset {s} outside [1, {}/2]",
                n
            )));
        }
        if offsets[..k].contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "duplicate circulant offset {s}"
            )));
        }
    }
    let edges = (0..n).flat_map(|i| offsets.iter().map(move |&s| (i, (i + s) % n)));
    Graph::new(n, edges)
}

/// Vertex 0 is the hub.
pub fn star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "star graph needs n >= 2, got {n}"
        )));
    }
    Graph::new(n, (1..n).map(|j| (0, j)))
}

/// Two cliques `K_{n1}` (ids `0..n1`) and `K_{n2}` (ids `n1..n1+n2`) joined by
/// the bridge `{n1-1, n1}`.
pub fn small_world(n1: usize, n2: usize) -> Result<Graph> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidParameter(format!(
            "small-world clique sizes must be >= 2, got ({n1}, {n2})"
        )));
    }
    let n = n1 + n2;
    let left = (0..n1).flat_map(|i| ((i + 1)..n1).map(move |j| (i, j)));
    let right = (n1..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)));
    Graph::new(n, left.chain(right).chain(std::iter::once((n1 - 1, n1))))
}

fn depth(i: usize) -> u32 {
    (i + 1).ilog2()
}

/// Complete binary tree in level order (children of `i` are `2i+1`, `2i+2`)
/// plus one edge from the root to the first leaf, in level order, of even
/// depth >= 2. The extra edge closes an odd cycle, so the result is never
/// bipartite.
///
/// `n = 3` has no leaf at depth 2 and degenerates to the triangle. Perfect
/// trees of odd height (n = 15, 63, ...) have no even-depth leaf at all and
/// are rejected.
pub fn binary_tree_plus(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "binary tree needs n >= 3, got {n}"
        )));
    }
    let mut edges: Vec<(usize, usize)> = (1..n).map(|c| ((c - 1) / 2, c)).collect();
    if n == 3 {
        edges.push((1, 2));
        return Graph::new(n, edges);
    }
    let is_leaf = |i: usize| 2 * i + 1 >= n;
    let leaf = (1..n)
        .find(|&i| is_leaf(i) && depth(i) >= 2 && depth(i).is_multiple_of(2))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "binary tree with n = {n} has no even-depth leaf; a root-leaf edge cannot close an odd cycle"
            ))
        })?;
    edges.push((0, leaf));
    Graph::new(n, edges)
}

/// Named generator with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Complete(usize),
    Circulant(usize, Vec<usize>),
    Star(usize),
    SmallWorld(usize, usize),
    BinaryTreePlus(usize),
}

impl Topology {
    pub fn build(&self) -> Result<Graph> {
        match self {
            Topology::Complete(n) => complete(*n),
            Topology::Circulant(n, offsets) => circulant(*n, offsets),
            Topology::Star(n) => star(*n),
            Topology::SmallWorld(a, b) => small_world(*a, *b),
            Topology::BinaryTreePlus(n) => binary_tree_plus(*n),
        }
    }

    /// The rows of the built-in `table1` suite.
    pub fn table1_suite() -> Vec<Topology> {
        vec![
            Topology::Complete(36),
            Topology::Circulant(36, vec![1, 2]),
            Topology::Star(36),
            Topology::SmallWorld(9, 27),
            Topology::BinaryTreePlus(32),
            Topology::BinaryTreePlus(128),
        ]
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Complete(n) => write!(f, "K{n}"),
            Topology::Circulant(n, offsets) => {
                let list: Vec<String> = offsets.iter().map(ToString::to_string).collect();
                write!(f, "C{n}({})", list.join(","))
            }
            Topology::Star(n) => write!(f, "S{n}"),
            Topology::SmallWorld(a, b) => write!(f, "SW{a},{b}"),
            Topology::BinaryTreePlus(n) => write!(f, "B+(n={n})"),
        }
    }
}
