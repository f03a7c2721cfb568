//! Algorithms for recurrent distributed graph problems.
//!
//! The support graph is fixed and known in advance. Each algorithm consists
//! of an unmetered preprocessing step that leaves a few bits at every vertex,
//! and an online protocol that solves a stream of instances (client sets,
//! precolorings, edge subsets, input labels) in synchronous rounds. The
//! [`sim`] module meters both costs; [`oracles`] provides exact solvers used
//! to check the online results.

pub mod graph;
pub mod sim;
pub mod oracles;
pub mod cds_tree;
pub mod cds_planar;
pub mod color_completion;
pub mod lcl_paths;
pub mod matching_mis;
