//! Strong metric dimension of graphs, with emphasis on generalized Petersen
//! graphs GP(n,k).
//!
//! The pieces:
//! - [`graph`]: graphs, GP(n,k) construction, BFS distances.
//! - [`resolution`]: the strong-resolution predicate, pair constraint rows,
//!   mutually maximally distant and diametral pairs.
//! - [`solver`]: exact minimum strong resolving sets and lower/upper bounds.
//! - [`constructions`]: explicit resolving sets for GP(n,2) families, the
//!   small-n basis catalog and the case-table checkers.
//! - [`experiments`]: reproduction and hypothesis-scan harness.
//! - [`cli`]: the `sdim` command-line front end.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod resolution;
pub mod solver;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{all_pairs_distances, diameter, DistanceMatrix, GpParams, Graph, Label};
pub use resolution::{
    build_constraints, diametral_pairs, mmd_pairs, strongly_resolves, verify_resolving_set,
    ConstraintSystem, MmdPairList, PairConstraint, Verdict,
};
pub use solver::{
    greedy_cover, lower_bound_diametral, lower_bound_mmd, solve_exact, BoundReport, LowerBound,
    SolveResult,
};
pub use vertex_set::VertexSet;
