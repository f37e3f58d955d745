//! Schur-complement cuts and spectral-gap certification for weighted
//! undirected graphs.
//!
//! The library computes the spectral gap `lambda` of the normalized
//! Laplacian, Schur complements of graphs onto vertex subsets (star-mesh
//! elimination), effective resistances between vertex sets, and the
//! conductance quantities `rho` and `sigma` built from them. The `sweep`
//! module finds a pair of vertex sets whose Schur-complement cut certifies
//! the gap within a constant factor; the `oracle` module verifies every
//! inequality by brute force on small instances.

pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod schur;
pub mod spectral;
pub mod sweep;

mod error;

pub use error::{Error, Result};
pub use graph::{CutPair, Graph, VertexSet};
