//! Plain-text edge-list format.
//!
//! ```text
//! # comment lines start with '#'
//! n 4          <- optional vertex count header
//! 0 1
//! 1 2
//! ```
//!
//! Vertex ids are 0-based. Without a header, `n` is one more than the largest
//! id seen.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut max_id = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() == 2 && tokens[0] == "n" {
            if declared_n.is_some() || !edges.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "the \"n <count>\" header must come once, before any edge".into(),
                });
            }
            let count = parse_id(tokens[1], line_no)?;
            declared_n = Some((count, line_no));
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two vertex ids, found {} tokens", tokens.len()),
            });
        }
        let a = parse_id(tokens[0], line_no)?;
        let b = parse_id(tokens[1], line_no)?;
        if a == b {
            return Err(Error::SelfLoop {
                line: line_no,
                vertex: a,
            });
        }
        max_id = max_id.max(a).max(b);
        edges.push((a, b));
    }

    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let n = match declared_n {
        Some((count, line)) if count <= max_id => {
            return Err(Error::Parse {
                line,
                message: format!("header declares n = {count} but vertex id {max_id} is used"),
            })
        }
        Some((count, _)) => count,
        None => max_id + 1,
    };
    Graph::new(n, edges)
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    token.parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("malformed vertex id {token:?}"),
    })
}

/// Canonical serialization: comment header, `n` line, sorted `i j` edges with
/// `i < j`.
pub fn to_edge_list(g: &Graph, label: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# generated by ppestim: {label}");
    let _ = writeln!(out, "n {}", g.n());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

/// SHA-256 (hex) of the label-free canonical form `n <count>` followed by the
/// sorted edges.
pub fn graph_digest(g: &Graph) -> String {
    let mut canonical = format!("n {}\n", g.n());
    for (i, j) in g.edges() {
        let _ = writeln!(canonical, "{i} {j}");
    }
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
