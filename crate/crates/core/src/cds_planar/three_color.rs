use super::{ClusterGraph, NonRepetitiveColoring, PlanarError};
use crate::graph::Graph;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Orientation of some cluster-graph edges with out-degree at most one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoForest {
    pub out: Vec<Option<usize>>,
}

impl PseudoForest {
    pub fn validate(&self, cg: &ClusterGraph) -> Result<(), PlanarError> {
        for (v, o) in self.out.iter().enumerate() {
            if let Some(p) = *o {
                if v == p || cg.weight(v, p) == 0 {
                    return Err(PlanarError::InvalidPseudoForest(v, p));
                }
            }
        }
        Ok(())
    }

    /// Vertices pointing at each vertex.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.out.len()];
        for (v, o) in self.out.iter().enumerate() {
            if let Some(p) = *o {
                ch[p].push(v);
            }
        }
        ch
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeColoring {
    /// Colors in `1..=3`, per cluster.
    pub colors: Vec<u8>,
    pub cv_iterations: usize,
    /// Rounds on the original graph: cluster rounds cost `d + 1` each.
    pub rounds_estimate: u64,
}

/// Parent pointers of a BFS tree of the cluster's induced subgraph.
fn bfs_parents(base: &Graph, members: &[usize], in_cluster: &dyn Fn(usize) -> bool, root: usize) -> std::collections::HashMap<usize, usize> {
    let mut parent = std::collections::HashMap::with_capacity(members.len());
    parent.insert(root, root);
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &w in base.neighbors(v) {
            if in_cluster(w) && !parent.contains_key(&w) {
                parent.insert(w, v);
                q.push_back(w);
            }
        }
    }
    parent
}

/// Proper 3-coloring of the pseudo-forest.
///
/// Each cluster reads the non-repetitive colors along a path from its own
/// root vertex into its parent cluster up to (excluding) the parent's root.
/// Concatenating a cluster's path with its parent's gives a simple path, so
/// the two color words differ. These words seed Cole-Vishkin.
pub fn three_color_pseudoforest(
    base: &Graph,
    cg: &ClusterGraph,
    pf: &PseudoForest,
    nrc: &NonRepetitiveColoring,
) -> Result<ThreeColoring, PlanarError> {
    pf.validate(cg)?;
    let k = cg.len();
    let members = &cg.members;
    let cluster = |v: usize| cg.cluster_of[v];
    // e_v: lexicographically smallest crossing edge towards out(v)
    let mut root = vec![0; k];
    let mut entry = vec![None; k];
    for v in 0..k {
        root[v] = members[v][0];
        if let Some(p) = pf.out[v] {
            let e = members[v]
                .iter()
                .flat_map(|&x| base.neighbors(x).iter().filter(move |&&y| cluster(y) == Some(p)).map(move |&y| (x, y)))
                .min()
                .expect("clusters joined by a weighted edge share a crossing edge");
            root[v] = e.0;
            entry[v] = Some(e.1);
        }
    }
    let trees: Vec<_> = (0..k)
        .map(|v| bfs_parents(base, &members[v], &|w| cluster(w) == Some(v), root[v]))
        .collect();
    let paths: Vec<Vec<usize>> = (0..k)
        .map(|v| {
            let mut path = vec![root[v]];
            let Some(p) = pf.out[v] else { return path };
            if pf.out[p] == Some(v) && v > p {
                return path;
            }
            let mut x = entry[v].expect("set with out");
            while x != root[p] {
                path.push(x);
                x = trees[p][&x];
            }
            path
        })
        .collect();
    let base_p = BigUint::from(nrc.palette + 1);
    let interim: Vec<BigUint> = paths
        .iter()
        .map(|path| path.iter().rev().fold(BigUint::ZERO, |acc, &x| acc * &base_p + nrc.colors[x]))
        .collect();
    for v in 0..k {
        if let Some(p) = pf.out[v] {
            if interim[v] == interim[p] {
                let mut both = paths[v].clone();
                both.extend_from_slice(&paths[p]);
                return Err(PlanarError::InvalidColoring(both));
            }
        }
    }
    let longest = paths.iter().map(Vec::len).max().unwrap_or(0) as u64;
    let (colors, cv_iterations) = cole_vishkin(pf, interim);
    let d = cg.diameter_bound.saturating_add(1);
    let rounds_estimate = d
        .saturating_mul(2)
        .saturating_add(longest)
        .saturating_add(d.saturating_mul(cv_iterations as u64 + 6));
    Ok(ThreeColoring { colors, cv_iterations, rounds_estimate })
}

fn cole_vishkin(pf: &PseudoForest, mut c: Vec<BigUint>) -> (Vec<u8>, usize) {
    let k = c.len();
    let six = BigUint::from(6u8);
    let mut iterations = 0;
    while c.iter().any(|x| *x >= six) {
        c = (0..k)
            .map(|v| {
                let parent = match pf.out[v] {
                    Some(p) => c[p].clone(),
                    None => &c[v] ^ BigUint::from(1u8),
                };
                let i = (&c[v] ^ &parent).trailing_zeros().expect("adjacent colors differ");
                BigUint::from(2 * i + u64::from(c[v].bit(i)))
            })
            .collect();
        iterations += 1;
    }
    let mut small: Vec<u8> = c.iter().map(|x| x.to_u32_digits().first().copied().unwrap_or(0) as u8).collect();
    let children = pf.children();
    for high in [5u8, 4, 3] {
        // shift down: children of a vertex end up sharing one color
        small = (0..k)
            .map(|v| match pf.out[v] {
                Some(p) => small[p],
                None => (0..3).find(|&x| x != small[v]).unwrap(),
            })
            .collect();
        let snapshot = small.clone();
        for v in 0..k {
            if snapshot[v] == high {
                let up = pf.out[v].map(|p| snapshot[p]);
                let down = children[v].first().map(|&u| snapshot[u]);
                small[v] = (0..3).find(|&x| Some(x) != up && Some(x) != down).unwrap();
            }
        }
    }
    (small.into_iter().map(|x| x + 1).collect(), iterations)
}
