//! Client dominating set on planar graphs.
//!
//! [`approx39`] is the constant-round constant-factor algorithm. The
//! `(1+eps)` scheme clusters the graph ([`cluster_for_eps`]) using a
//! non-repetitive vertex coloring computed in preprocessing, then solves each
//! cluster exactly ([`solve_clusters`]).

mod approx;
#[cfg(test)]
use ctas::client_edges;
mod ctas;
mod nonrep;
mod three_color;

pub use approx::{approx39, approx39_parts, Approx39Parts, Approx39Program, LocalView, APPROX39_RADIUS};
pub use ctas::{
    cluster_for_eps, ctas, iterations_for_eps, solve_clusters, ClusterGraph, CtasOptions, CtasRun, LevelStats,
    SolveOptions,
};
pub use nonrep::{
    compute_nonrepetitive_coloring, find_repetition, NonRepetitiveColoring, NrcOptions, DEFAULT_PALETTE,
};
pub use three_color::{three_color_pseudoforest, PseudoForest, ThreeColoring};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarError {
    #[error("no non-repetitive coloring found with {palette} colors after {attempts} resamplings")]
    NotFound { palette: u32, attempts: usize },
    #[error("coloring repeats along a path: {0:?}")]
    InvalidColoring(Vec<usize>),
    #[error("pseudo-forest edge {0} -> {1} is not an edge of the cluster graph")]
    InvalidPseudoForest(usize, usize),
    #[error("cluster of {size} vertices exceeds the exact-solve cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("eps = {0} must lie in (0, 1]")]
    InvalidEps(f64),
}
