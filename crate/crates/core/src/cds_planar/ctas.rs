use super::approx::approx39;
use super::three_color::{three_color_pseudoforest, PseudoForest};
use super::{NonRepetitiveColoring, PlanarError};
use crate::cds_tree::{CdsInstance, DominatingSet};
use crate::graph::Graph;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// Partition of the (client-incident part of the) graph into connected
/// clusters, with crossing weights between clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterGraph {
    pub level: usize,
    /// `None` for vertices dropped as isolated non-clients.
    pub cluster_of: Vec<Option<usize>>,
    /// Sorted members per cluster; clusters are numbered by smallest member.
    pub members: Vec<Vec<usize>>,
    /// Weight per cluster pair `(a, b)` with `a < b`.
    pub weights: BTreeMap<(usize, usize), u64>,
    pub diameter_bound: u64,
}

impl ClusterGraph {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weight(&self, a: usize, b: usize) -> u64 {
        self.weights.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.values().sum()
    }

    /// Weighted neighbors of every cluster, ascending by id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (&(a, b), &w) in &self.weights {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Largest hop diameter of a cluster in `base`, by BFS from every member.
    pub fn measured_diameter(&self, base: &Graph) -> usize {
        let mut best = 0;
        for (c, members) in self.members.iter().enumerate() {
            for &s in members {
                let mut dist = BTreeMap::from([(s, 0usize)]);
                let mut q = VecDeque::from([s]);
                while let Some(v) = q.pop_front() {
                    let d = dist[&v];
                    best = best.max(d);
                    for &w in base.neighbors(v) {
                        if self.cluster_of[w] == Some(c) && !dist.contains_key(&w) {
                            dist.insert(w, d + 1);
                            q.push_back(w);
                        }
                    }
                }
            }
        }
        best
    }

    /// Whether every cluster induces a connected subgraph of `base`.
    pub fn clusters_connected(&self, base: &Graph) -> bool {
        self.members.iter().enumerate().all(|(c, members)| {
            let mut seen = vec![members[0]];
            let mut i = 0;
            while i < seen.len() {
                let v = seen[i];
                i += 1;
                for &w in base.neighbors(v) {
                    if self.cluster_of[w] == Some(c) && !seen.contains(&w) {
                        seen.push(w);
                    }
                }
            }
            seen.len() == members.len()
        })
    }

    /// Groups clusters by `label` (one label per current cluster) into the
    /// next level, summing crossing weights.
    fn merge(&self, label: &[usize], diameter_bound: u64) -> ClusterGraph {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (c, &l) in label.iter().enumerate() {
            groups.entry(l).or_default().extend_from_slice(&self.members[c]);
        }
        let mut members: Vec<Vec<usize>> = groups.into_values().collect();
        for m in &mut members {
            m.sort_unstable();
        }
        members.sort_unstable_by_key(|m| m[0]);
        let mut cluster_of = vec![None; self.cluster_of.len()];
        for (c, m) in members.iter().enumerate() {
            for &v in m {
                cluster_of[v] = Some(c);
            }
        }
        let new_id = |old: usize| cluster_of[self.members[old][0]].expect("every member is assigned");
        let mut weights = BTreeMap::new();
        for (&(a, b), &w) in &self.weights {
            let (x, y) = (new_id(a), new_id(b));
            if x != y {
                *weights.entry((x.min(y), x.max(y))).or_insert(0) += w;
            }
        }
        ClusterGraph { level: self.level + 1, cluster_of, members, weights, diameter_bound }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Graph restricted to edges with at least one client endpoint.
pub(crate) fn client_edges(g: &Graph, inst: &CdsInstance) -> Graph {
    g.edge_subgraph(|e| {
        let (u, v) = g.edge(e);
        inst.clients[u] || inst.clients[v]
    })
}

/// Initial clustering: every vertex outside the constant approximation joins
/// a neighboring dominator, or failing that a neighboring client.
fn initial_clustering(base: &Graph, inst: &CdsInstance) -> (ClusterGraph, usize) {
    let n = base.n();
    let d_star = approx39(base, inst);
    let mut dsu = Dsu::new(n);
    let mut dropped = vec![false; n];
    for v in 0..n {
        if d_star.contains(v) {
            continue;
        }
        let nbrs = base.neighbors(v);
        let target = nbrs.iter().copied().find(|&u| d_star.contains(u)).or_else(|| nbrs.iter().copied().find(|&u| inst.clients[u]));
        match target {
            Some(u) => dsu.union(u, v),
            // only isolated non-clients have neither
            None => dropped[v] = !inst.clients[v],
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..n).filter(|&v| !dropped[v]) {
        groups.entry(dsu.find(v)).or_default().push(v);
    }
    let members: Vec<Vec<usize>> = groups.into_values().collect();
    let mut cluster_of = vec![None; n];
    for (c, m) in members.iter().enumerate() {
        for &v in m {
            cluster_of[v] = Some(c);
        }
    }
    let mut weights = BTreeMap::new();
    for &(u, v) in base.edges() {
        let (a, b) = (cluster_of[u].unwrap(), cluster_of[v].unwrap());
        if a != b {
            weights.insert((a.min(b), a.max(b)), 1);
        }
    }
    (ClusterGraph { level: 0, cluster_of, members, weights, diameter_bound: 4 }, d_star.size())
}

/// Iterations needed for crossing weight to fall to `eps/234` of the start.
pub fn iterations_for_eps(eps: f64) -> usize {
    ((234.0 / eps).ln() / (24.0f64 / 23.0).ln()).ceil() as usize
}

/// Bookkeeping for one contraction step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub clusters: usize,
    pub weight: u64,
    pub weight_next: u64,
    pub pseudo_forest_weight: u64,
    pub star_weight: u64,
    /// Largest diameter of a pruned pseudo-forest component, in cluster hops.
    pub pruned_diameter: usize,
    pub diameter_bound: u64,
    pub measured_diameter: Option<usize>,
    pub cv_iterations: usize,
    pub rounds_estimate: u64,
}

impl LevelStats {
    /// `wt(G_{t+1}) <= 23/24 wt(G_t)`.
    pub fn decays(&self) -> bool {
        24 * self.weight_next <= 23 * self.weight
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Largest cluster solved exactly.
    pub cap: usize,
    /// Solve larger clusters with [`approx39`] instead of failing.
    pub fallback: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { cap: 30, fallback: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CtasOptions {
    pub solve: SolveOptions,
    pub measure_diameters: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CtasRun {
    pub clusters: ClusterGraph,
    pub trace: Vec<LevelStats>,
    pub initial_weight: u64,
    pub approx_size: usize,
    pub rounds_estimate: u64,
}

fn heavy_out(adj: &[Vec<(usize, u64)>]) -> PseudoForest {
    let out = adj
        .iter()
        .map(|list| list.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|&(w, _)| w))
        .collect();
    PseudoForest { out }
}

/// One contraction step; returns the next level and its statistics.
fn contract_once(
    base: &Graph,
    cg: &ClusterGraph,
    nrc: &NonRepetitiveColoring,
    measure: bool,
) -> Result<(ClusterGraph, LevelStats), PlanarError> {
    let k = cg.len();
    let adj = cg.adjacency();
    let pf = heavy_out(&adj);
    let col = three_color_pseudoforest(base, cg, &pf, nrc)?;
    // a 2-cycle keeps its edge as the out-edge of the lower id only
    let out: Vec<Option<usize>> = (0..k)
        .map(|u| pf.out[u].filter(|&p| !(pf.out[p] == Some(u) && u > p)))
        .collect();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut h: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for u in 0..k {
        if let Some(p) = out[u] {
            h.insert(key(u, p), cg.weight(u, p));
        }
    }
    let pseudo_forest_weight = h.values().sum();
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); k];
    for u in 0..k {
        if let Some(p) = out[u] {
            ins[p].push(u);
        }
    }
    for (colour, other) in [(1u8, None), (2u8, Some(3u8))] {
        for u in (0..k).filter(|&u| col.colors[u] == colour) {
            let keep = |v: usize| other.is_none_or(|c| col.colors[v] == c);
            let i_edges: Vec<_> = ins[u].iter().copied().filter(|&v| keep(v)).map(|v| key(u, v)).filter(|e| h.contains_key(e)).collect();
            let o_edges: Vec<_> = out[u].filter(|&p| keep(p)).map(|p| key(u, p)).filter(|e| h.contains_key(e)).into_iter().collect();
            let wt = |es: &[(usize, usize)], h: &BTreeMap<_, u64>| es.iter().map(|e| h[e]).sum::<u64>();
            let drop = if wt(&o_edges, &h) < wt(&i_edges, &h) { o_edges } else { i_edges };
            for e in drop {
                h.remove(&e);
            }
        }
    }
    let mut h_adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in h.keys() {
        h_adj[a].push(b);
        h_adj[b].push(a);
    }
    let pruned_diameter = forest_diameter(&h_adj);
    // spanning forest of H by BFS; an edge's depth is its upper endpoint's
    let mut depth = vec![usize::MAX; k];
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for s in 0..k {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &h_adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    q.push_back(w);
                    if depth[v] % 2 == 0 { even.push(key(v, w)) } else { odd.push(key(v, w)) }
                }
            }
        }
    }
    let wt = |es: &[(usize, usize)]| es.iter().map(|e| h[e]).sum::<u64>();
    let stars = if wt(&even) < wt(&odd) { odd } else { even };
    let star_weight = wt(&stars);
    let mut dsu = Dsu::new(k);
    for &(a, b) in &stars {
        dsu.union(a, b);
    }
    let label: Vec<usize> = (0..k).map(|c| dsu.find(c)).collect();
    let next = cg.merge(&label, cg.diameter_bound.saturating_mul(3).saturating_add(2));
    let stats = LevelStats {
        level: cg.level,
        clusters: k,
        weight: cg.total_weight(),
        weight_next: next.total_weight(),
        pseudo_forest_weight,
        star_weight,
        pruned_diameter,
        diameter_bound: cg.diameter_bound,
        measured_diameter: measure.then(|| cg.measured_diameter(base)),
        cv_iterations: col.cv_iterations,
        rounds_estimate: col.rounds_estimate.saturating_add(cg.diameter_bound.saturating_add(1).saturating_mul(6)),
    };
    Ok((next, stats))
}

fn forest_diameter(adj: &[Vec<usize>]) -> usize {
    let bfs = |s: usize| {
        let mut dist = BTreeMap::from([(s, 0usize)]);
        let mut q = VecDeque::from([s]);
        let mut far = (0, s);
        while let Some(v) = q.pop_front() {
            let d = dist[&v];
            far = far.max((d, v));
            for &w in &adj[v] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    q.push_back(w);
                }
            }
        }
        far
    };
    (0..adj.len()).map(|s| bfs(bfs(s).1).0).max().unwrap_or(0)
}

/// Clusters the instance so that the crossing weight drops to `eps/234` of
/// its initial value.
pub fn cluster_for_eps(
    g: &Graph,
    inst: &CdsInstance,
    eps: f64,
    nrc: &NonRepetitiveColoring,
    measure_diameters: bool,
) -> Result<CtasRun, PlanarError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(PlanarError::InvalidEps(eps));
    }
    let base = client_edges(g, inst);
    let (mut cg, approx_size) = initial_clustering(&base, inst);
    let initial_weight = cg.total_weight();
    let mut trace = Vec::new();
    let mut rounds = 6 + super::APPROX39_RADIUS as u64;
    for _ in 0..=iterations_for_eps(eps) {
        if cg.total_weight() == 0 {
            // nothing left to contract; later steps are no-ops
            break;
        }
        let (next, stats) = contract_once(&base, &cg, nrc, measure_diameters)?;
        rounds = rounds.saturating_add(stats.rounds_estimate);
        trace.push(stats);
        cg = next;
    }
    Ok(CtasRun { clusters: cg, trace, initial_weight, approx_size, rounds_estimate: rounds })
}

/// Minimum client dominating set of `g` by branch and bound.
fn exact_cds(g: &Graph, clients: &[bool]) -> Vec<usize> {
    fn go(g: &Graph, clients: &[bool], cover: &mut [u32], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        let Some(c) = (0..g.n()).find(|&c| clients[c] && cover[c] == 0) else {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        };
        if chosen.len() + 1 >= best.len() {
            return;
        }
        let mut cands: Vec<usize> = std::iter::once(c).chain(g.neighbors(c).iter().copied()).collect();
        let gain = |u: usize, cover: &[u32]| {
            std::iter::once(u).chain(g.neighbors(u).iter().copied()).filter(|&x| clients[x] && cover[x] == 0).count()
        };
        cands.sort_by_key(|&u| (std::cmp::Reverse(gain(u, cover)), u));
        for u in cands {
            chosen.push(u);
            for x in std::iter::once(u).chain(g.neighbors(u).iter().copied()) {
                cover[x] += 1;
            }
            go(g, clients, cover, chosen, best);
            for x in std::iter::once(u).chain(g.neighbors(u).iter().copied()) {
                cover[x] -= 1;
            }
            chosen.pop();
        }
    }
    let mut best: Vec<usize> = (0..g.n()).filter(|&v| clients[v]).collect();
    let mut cover = vec![0; g.n()];
    go(g, clients, &mut cover, &mut Vec::new(), &mut best);
    best
}

/// Solves every cluster on its own, ignoring crossing edges.
pub fn solve_clusters(
    g: &Graph,
    inst: &CdsInstance,
    cg: &ClusterGraph,
    opts: &SolveOptions,
) -> Result<DominatingSet, PlanarError> {
    let mut set = DominatingSet::empty(g.n());
    for members in &cg.members {
        let local = g.induced(members);
        let clients: Vec<bool> = members.iter().map(|&v| inst.clients[v]).collect();
        let picked: Vec<usize> = if members.len() <= opts.cap {
            exact_cds(&local, &clients)
        } else if opts.fallback {
            log::warn!("cluster of {} vertices above cap {}, using approx39", members.len(), opts.cap);
            approx39(&local, &CdsInstance::new(clients)).vertices()
        } else {
            return Err(PlanarError::SizeCap { size: members.len(), cap: opts.cap });
        };
        for i in picked {
            set.members[members[i]] = true;
        }
    }
    Ok(set)
}

/// Clusters, then solves each cluster.
pub fn ctas(
    g: &Graph,
    inst: &CdsInstance,
    eps: f64,
    nrc: &NonRepetitiveColoring,
    opts: &CtasOptions,
) -> Result<(DominatingSet, CtasRun), PlanarError> {
    let run = cluster_for_eps(g, inst, eps, nrc, opts.measure_diameters)?;
    let set = solve_clusters(g, inst, &run.clusters, &opts.solve)?;
    Ok((set, run))
}
