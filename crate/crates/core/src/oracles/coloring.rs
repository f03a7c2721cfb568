//! Exact chromatic number and exact color completion.

use super::OracleError;
use crate::graph::Graph;
use std::collections::{BTreeMap, BTreeSet};

/// Chromatic number by k-colorability backtracking for increasing k.
pub fn chromatic_exact(g: &Graph, cap: usize) -> Result<(usize, Vec<u32>), OracleError> {
    let n = g.n();
    if n > cap {
        return Err(OracleError::SizeCap { n, cap });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let start = if g.m() > 0 { 2 } else { 1 };
    for k in start..=n {
        let mut color = vec![0u32; n];
        if color_with(g, &order, 0, k as u32, &mut color) {
            return Ok((k, color));
        }
    }
    unreachable!("n colors always suffice")
}

fn color_with(g: &Graph, order: &[usize], i: usize, k: u32, color: &mut [u32]) -> bool {
    let Some(&v) = order.get(i) else { return true };
    // a fresh color is interchangeable with any other unused one
    let used_max = order[..i].iter().map(|&u| color[u]).max().unwrap_or(0);
    for c in 1..=k.min(used_max + 1) {
        if g.neighbors(v).iter().all(|&w| color[w] != c) {
            color[v] = c;
            if color_with(g, order, i + 1, k, color) {
                return true;
            }
        }
    }
    color[v] = 0;
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcObjective {
    /// Colors used on uncolored vertices that no precolored vertex uses.
    ChiNew,
    /// All distinct colors of the completed coloring.
    ChiAll,
}

/// Optimal completion of a proper precoloring.
///
/// Both objectives differ by the constant number of precolor classes, so a
/// single search minimizing the number of new colors serves both. New colors
/// are the smallest positive integers outside the precolor palette.
pub fn cc_exact(
    g: &Graph,
    pc: &BTreeMap<usize, u32>,
    objective: CcObjective,
    cap: usize,
) -> Result<(usize, Vec<u32>), OracleError> {
    let n = g.n();
    if n > cap {
        return Err(OracleError::SizeCap { n, cap });
    }
    let pre: BTreeSet<u32> = pc.values().copied().collect();
    let fresh: Vec<u32> = (1..).filter(|c| !pre.contains(c)).take(n).collect();
    let mut color = vec![0u32; n];
    for (&v, &c) in pc {
        color[v] = c;
    }
    let mut order: Vec<usize> = (0..n).filter(|v| !pc.contains_key(v)).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut search = CompletionSearch {
        g,
        order: &order,
        pre: pre.iter().copied().collect(),
        fresh: &fresh,
        best: order.len() + 1,
        best_color: Vec::new(),
    };
    search.run(0, 0, &mut color);
    let new = search.best;
    let value = match objective {
        CcObjective::ChiNew => new,
        CcObjective::ChiAll => new + pre.len(),
    };
    Ok((value, search.best_color))
}

struct CompletionSearch<'a> {
    g: &'a Graph,
    order: &'a [usize],
    pre: Vec<u32>,
    fresh: &'a [u32],
    best: usize,
    best_color: Vec<u32>,
}

impl CompletionSearch<'_> {
    fn run(&mut self, i: usize, used_new: usize, color: &mut Vec<u32>) {
        if used_new >= self.best {
            return;
        }
        let Some(&v) = self.order.get(i) else {
            self.best = used_new;
            self.best_color = color.clone();
            return;
        };
        let free = |c: u32, color: &[u32]| self.g.neighbors(v).iter().all(|&w| color[w] != c);
        for k in 0..self.pre.len() {
            let c = self.pre[k];
            if free(c, color) {
                color[v] = c;
                self.run(i + 1, used_new, color);
            }
        }
        for j in 0..=used_new.min(self.fresh.len() - 1) {
            let c = self.fresh[j];
            if free(c, color) {
                color[v] = c;
                self.run(i + 1, used_new.max(j + 1), color);
            }
        }
        color[v] = 0;
    }
}
