//! Maximal matching and maximal independent sets on edge-subset instances.
//!
//! Every instance switches off some edges of the support graph. Switched-off
//! edges still carry messages, they just may not appear in the answer.
//! Matchings on forests take two request phases per forest; MIS follows a
//! proper coloring color by color or extends an independent set part by part
//! over a vertex cover of the graph.

mod matching;
mod mis;
mod split;
#[cfg(test)]
mod tests;

pub use matching::{mm_arboricity, mm_tree, ForestMatching, MmMsg, MmNode};
pub use mis::{
    line_graph, mis_by_coloring, mis_split, CliqueMis, ColorMis, EdgelessMis, MisSplit, SplitMsg, SubgraphMis,
};
pub use split::{degree_split, DegreePartition};

use crate::graph::{Graph, GraphError};
use crate::sim::{RecurrentInstance, SimError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MmError {
    #[error("active mask has {got} entries for {expected} edges")]
    MaskLength { got: usize, expected: usize },
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("invalid forest decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("d = {d} is outside 1..={max}")]
    InvalidD { d: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// The edges that are switched on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphInstance {
    pub active: Vec<bool>,
}

impl SubgraphInstance {
    pub fn new(g: &Graph, active: Vec<bool>) -> Result<Self, MmError> {
        if active.len() != g.m() {
            return Err(MmError::MaskLength { got: active.len(), expected: g.m() });
        }
        Ok(SubgraphInstance { active })
    }

    pub fn full(g: &Graph) -> Self {
        SubgraphInstance { active: vec![true; g.m()] }
    }

    pub fn empty(g: &Graph) -> Self {
        SubgraphInstance { active: vec![false; g.m()] }
    }

    pub fn from_edges(g: &Graph, edges: &[(usize, usize)]) -> Result<Self, MmError> {
        let mut active = vec![false; g.m()];
        for &(u, v) in edges {
            let e = g.edge_id(u, v).ok_or(MmError::NotAnEdge(u, v))?;
            active[e] = true;
        }
        Ok(SubgraphInstance { active })
    }

    pub fn from_instance(inst: &RecurrentInstance) -> Option<Self> {
        match inst {
            RecurrentInstance::EdgeSubset(mask) => Some(SubgraphInstance { active: mask.clone() }),
            _ => None,
        }
    }

    pub fn to_instance(&self) -> RecurrentInstance {
        RecurrentInstance::EdgeSubset(self.active.clone())
    }

    pub fn count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }
}

/// Partner of every vertex; `None` for unmatched vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    /// Matched edge ids in ascending order.
    pub fn edges(&self, g: &Graph) -> Vec<usize> {
        let mut out: Vec<usize> = (0..g.n())
            .filter_map(|v| self.partner[v].filter(|&w| v < w).and_then(|w| g.edge_id(v, w)))
            .collect();
        out.sort_unstable();
        out
    }
}
