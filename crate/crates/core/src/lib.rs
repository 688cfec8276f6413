//! Distributed least-squares state estimation from noisy relative
//! measurements on a graph.
//!
//! Each agent `i` holds a scalar state `x_i` and measures `x̃_ij ≈ x_j − x_i`
//! for every neighbor `j`. States are identifiable only up to a common shift.
//! The crate provides:
//!
//! - [`graph`], [`generators`], [`edgelist`]: topologies and their operators;
//! - [`spectral`]: spectra of `F_ρ` and of the normalized Laplacian, and the
//!   optimal penalty ρ⋆;
//! - [`measurement`]: seeded noisy measurement sets;
//! - [`estimator`]: the centralized solution and the distributed
//!   proximal-point schemes, as a message-passing simulation and as a dense
//!   recursion;
//! - [`metrics`]: cost, effective convergence rate and final MSE;
//! - [`bench`]: the experiment runner behind the CLI.

pub mod bench;
pub mod edgelist;
pub mod eigen;
pub mod error;
pub mod estimator;
pub mod generators;
pub mod graph;
pub mod matrix;
pub mod measurement;
pub mod metrics;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::Graph;
