//! Exact standard realizations of two-dimensional topological crystals.
//!
//! A crystal is given by a finite base graph together with a vanishing
//! subgroup of its first homology. Its standard realization corresponds to
//! a point on the graph quadric with coordinates in an imaginary quadratic
//! field; everything here is computed exactly.

pub mod arith;
pub mod cli;
pub mod fixtures;
pub mod graph;
pub mod invariants;
pub mod quadric;
pub mod io;
pub mod realization;
pub mod svg;
pub mod tiling;

pub use graph::{chain_norm_l1, Graph, GraphError, HomologyBasis, OneChain, SpanningTree};
