//! Independent validity checks for algorithm outputs.

use crate::graph::Graph;
use std::collections::{BTreeMap, BTreeSet};

/// Every client is a member or has a member neighbor.
pub fn is_client_dominating(g: &Graph, clients: &[bool], members: &[bool]) -> bool {
    (0..g.n()).all(|v| !clients[v] || members[v] || g.neighbors(v).iter().any(|&w| members[w]))
}

/// Clients that are neither members nor adjacent to one.
pub fn undominated_clients(g: &Graph, clients: &[bool], members: &[bool]) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| clients[v] && !members[v] && !g.neighbors(v).iter().any(|&w| members[w]))
        .collect()
}

/// Checks that per-vertex partner pointers describe a matching on active
/// edges and returns its edge ids.
pub fn matching_edges(g: &Graph, active: &[bool], partner: &[Option<usize>]) -> Result<Vec<usize>, String> {
    let mut edges = Vec::new();
    for v in 0..g.n() {
        if let Some(w) = partner[v] {
            if w >= g.n() || partner[w] != Some(v) {
                return Err(format!("partner of {v} is {w}, which does not point back"));
            }
            let e = g.edge_id(v, w).ok_or_else(|| format!("({v}, {w}) is not an edge"))?;
            if !active[e] {
                return Err(format!("edge ({v}, {w}) is not active"));
            }
            if v < w {
                edges.push(e);
            }
        }
    }
    Ok(edges)
}

/// A matching on the active edges to which no active edge can be added.
pub fn is_maximal_matching(g: &Graph, active: &[bool], partner: &[Option<usize>]) -> bool {
    if matching_edges(g, active, partner).is_err() {
        return false;
    }
    g.edges()
        .iter()
        .enumerate()
        .all(|(e, &(u, v))| !active[e] || partner[u].is_some() || partner[v].is_some())
}

/// Independent in the active subgraph and no vertex can be added.
pub fn is_maximal_independent(g: &Graph, active: &[bool], set: &[bool]) -> bool {
    let active_edges = || g.edges().iter().enumerate().filter(|&(e, _)| active[e]).map(|(_, &uv)| uv);
    if active_edges().any(|(u, v)| set[u] && set[v]) {
        return false;
    }
    let mut dominated = set.to_vec();
    for (u, v) in active_edges() {
        if set[u] {
            dominated[v] = true;
        }
        if set[v] {
            dominated[u] = true;
        }
    }
    dominated.iter().all(|&d| d)
}

/// `colors` is total, proper, and agrees with the precoloring.
pub fn is_proper_completion(g: &Graph, pc: &BTreeMap<usize, u32>, colors: &[u32]) -> bool {
    colors.iter().all(|&c| c > 0)
        && pc.iter().all(|(&v, &c)| colors[v] == c)
        && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

/// Distinct colors used by precolored vertices and by the rest.
pub fn palettes(pc: &BTreeMap<usize, u32>, colors: &[u32]) -> (BTreeSet<u32>, BTreeSet<u32>) {
    let pre: BTreeSet<u32> = pc.values().copied().collect();
    let un: BTreeSet<u32> =
        colors.iter().enumerate().filter(|(v, _)| !pc.contains_key(v)).map(|(_, &c)| c).collect();
    (pre, un)
}
