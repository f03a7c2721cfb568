//! Vertex partitions with small induced degree.

use super::MmError;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePartition {
    /// Part of every vertex, in `1..=d`.
    pub part: Vec<usize>,
    pub d: usize,
    /// Local moves the search made.
    pub moves: usize,
}

impl DegreePartition {
    /// `⌈Δ/d⌉`.
    pub fn bound(&self, g: &Graph) -> usize {
        g.max_degree().div_ceil(self.d)
    }

    /// Neighbors of `v` in its own part.
    pub fn induced_degree(&self, g: &Graph, v: usize) -> usize {
        g.neighbors(v).iter().filter(|&&w| self.part[w] == self.part[v]).count()
    }

    pub fn max_induced_degree(&self, g: &Graph) -> usize {
        (0..g.n()).map(|v| self.induced_degree(g, v)).max().unwrap_or(0)
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.d];
        for (v, &p) in self.part.iter().enumerate() {
            out[p - 1].push(v);
        }
        out
    }
}

/// Splits the vertices into `d` parts whose induced degree is at most
/// `⌈Δ/d⌉`.
///
/// Starts from `v mod d` and moves any vertex with too many neighbors in its
/// part to the part holding the fewest of them. Every move lowers the sum of
/// induced degrees by at least 2, so there are at most `|E|` moves.
pub fn degree_split(g: &Graph, d: usize) -> Result<DegreePartition, MmError> {
    let max = g.max_degree().max(1);
    if d == 0 || d > max {
        return Err(MmError::InvalidD { d, max });
    }
    let bound = g.max_degree().div_ceil(d);
    let mut part: Vec<usize> = (0..g.n()).map(|v| v % d + 1).collect();
    let mut moves = 0;
    let mut counts = vec![0usize; d + 1];
    loop {
        let mut moved = false;
        for v in 0..g.n() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in g.neighbors(v) {
                counts[part[w]] += 1;
            }
            if counts[part[v]] <= bound {
                continue;
            }
            let best = (1..=d).min_by_key(|&p| counts[p]).expect("d >= 1");
            part[v] = best;
            moves += 1;
            moved = true;
        }
        if !moved {
            break;
        }
    }
    Ok(DegreePartition { part, d, moves })
}
