//! Exact client dominating set solvers.

use super::OracleError;
use crate::graph::{Graph, RootedTree};

const INF: u64 = u64::MAX / 4;
const IN: usize = 0;
const DOMINATED: usize = 1;
const PENDING: usize = 2;
const FREE: usize = 3;

/// Minimum client dominating set of a tree by dynamic programming.
///
/// Per vertex the subtree cost is tracked for four states: in the set,
/// dominated by a child, an undominated client waiting for its parent, and an
/// undominated non-client.
pub fn cds_tree_dp(t: &RootedTree, clients: &[bool]) -> (usize, Vec<bool>) {
    let n = t.n();
    let mut cost = vec![[INF; 4]; n];
    for &v in t.bfs_order().iter().rev() {
        let kids = t.children(v);
        let with_v = 1 + sat_sum(kids.iter().map(|&c| cost[c].iter().copied().min().unwrap()));
        let best = |c: usize| cost[c][IN].min(cost[c][DOMINATED]).min(cost[c][FREE]);
        let base = sat_sum(kids.iter().map(|&c| best(c)));
        let dominated = kids.iter().map(|&c| cost[c][IN] - best(c)).min().map_or(INF, |extra| base + extra);
        let alone = sat_sum(kids.iter().map(|&c| cost[c][DOMINATED].min(cost[c][FREE])));
        cost[v] = [
            with_v.min(INF),
            dominated.min(INF),
            if clients[v] { alone } else { INF },
            if clients[v] { INF } else { alone },
        ];
    }
    let mut members = vec![false; n];
    if n == 0 {
        return (0, members);
    }
    let root = t.root();
    let root_state = argmin(&cost[root], &[IN, DOMINATED, FREE]);
    let mut state = vec![0; n];
    state[root] = root_state;
    for &v in t.bfs_order() {
        let kids = t.children(v);
        match state[v] {
            IN => {
                members[v] = true;
                for &c in kids {
                    state[c] = argmin(&cost[c], &[IN, DOMINATED, PENDING, FREE]);
                }
            }
            DOMINATED => {
                let best = |c: usize| cost[c][IN].min(cost[c][DOMINATED]).min(cost[c][FREE]);
                let forced = *kids.iter().min_by_key(|&&c| (cost[c][IN] - best(c), c)).expect("has a child");
                for &c in kids {
                    state[c] = if c == forced { IN } else { argmin(&cost[c], &[IN, DOMINATED, FREE]) };
                }
            }
            _ => {
                for &c in kids {
                    state[c] = argmin(&cost[c], &[DOMINATED, FREE]);
                }
            }
        }
    }
    (cost[root][root_state] as usize, members)
}

fn sat_sum(it: impl Iterator<Item = u64>) -> u64 {
    it.fold(0u64, |acc, x| acc.saturating_add(x)).min(INF)
}

fn argmin(cost: &[u64; 4], allowed: &[usize]) -> usize {
    *allowed.iter().min_by_key(|&&s| cost[s]).expect("non-empty")
}

/// Minimum client dominating set by increasing-size subset search.
///
/// Only vertices in the closed neighborhood of a client are candidates; sizes
/// whose best possible coverage cannot reach every client are skipped.
pub fn cds_bruteforce(g: &Graph, clients: &[bool], cap: usize) -> Result<(usize, Vec<bool>), OracleError> {
    let n = g.n();
    if n > cap || n > 64 {
        return Err(OracleError::SizeCap { n, cap: cap.min(64) });
    }
    let client_mask: u64 = (0..n).filter(|&v| clients[v]).fold(0, |m, v| m | 1 << v);
    let cover: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u64 << v, |m, &w| m | 1 << w) & client_mask)
        .collect();
    let candidates: Vec<usize> = (0..n).filter(|&v| cover[v] != 0).collect();
    let need = client_mask.count_ones() as usize;
    let widest = candidates.iter().map(|&v| cover[v].count_ones() as usize).max().unwrap_or(0);
    for size in 0..=candidates.len() {
        if size * widest < need {
            continue;
        }
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let covered = pick.iter().fold(0u64, |m, &i| m | cover[candidates[i]]);
            if covered == client_mask {
                let mut members = vec![false; n];
                for &i in &pick {
                    members[candidates[i]] = true;
                }
                return Ok((size, members));
            }
            if !next_combination(&mut pick, candidates.len()) {
                break;
            }
        }
    }
    unreachable!("the set of all candidates dominates every client")
}

/// Advances `pick` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The graph `G_C`: two new vertices `u1 = n`, `u2 = n + 1`, with `u1`
/// adjacent to `u2` and to every non-client. Client dominating sets of `G`
/// plus `u1` are exactly the dominating sets of `G_C` containing `u1`.
pub fn reduction_graph(g: &Graph, clients: &[bool]) -> Graph {
    let n = g.n();
    let mut edges = g.edges().to_vec();
    edges.push((n, n + 1));
    edges.extend((0..n).filter(|&v| !clients[v]).map(|v| (v, n)));
    Graph::new(n + 2, &edges).expect("new vertices add no duplicate edges")
}

/// Whether `OPT(G, C) + 1` equals the domination number of `G_C`.
pub fn reduction_holds(g: &Graph, clients: &[bool], cap: usize) -> Result<bool, OracleError> {
    let (opt, _) = cds_bruteforce(g, clients, cap)?;
    let gc = reduction_graph(g, clients);
    let (ds, _) = cds_bruteforce(&gc, &vec![true; gc.n()], cap + 2)?;
    Ok(opt + 1 == ds)
}
