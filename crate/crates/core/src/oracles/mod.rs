//! Exact ground-truth solvers and validators used to check the algorithms.

mod cds;
mod coloring;
mod lcl;
pub mod planarity;
pub mod validate;

pub use cds::{cds_bruteforce, cds_tree_dp, reduction_graph, reduction_holds};
pub use coloring::{cc_exact, chromatic_exact, CcObjective};
pub use lcl::{lcl_count, lcl_exhaustive};
#[allow(unused_imports)]
pub(crate) use cds::next_combination;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} vertices exceed the oracle cap of {cap}")]
    SizeCap { n: usize, cap: usize },
}
