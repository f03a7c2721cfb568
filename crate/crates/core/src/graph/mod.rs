//! Undirected simple graphs with dense vertex ids, rooted trees and forest
//! decompositions.

mod gen;
pub mod io;

pub use gen::{
    generate_complete, generate_cycle, generate_path, generate_random_graph,
    generate_random_planar, generate_random_planar_with, generate_random_tree, generate_star,
};

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("edges do not fit into {target} forests")]
    BudgetExceeded { target: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted ascending, and edges are numbered by their
/// position in the lexicographically sorted list of pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    // edge id for each adjacency slot, parallel to `adj`
    adj_edge: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        let mut adj_edge = vec![Vec::new(); n];
        for (id, &(u, v)) in norm.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let mut sorted_adj = Vec::with_capacity(n);
        for (v, list) in adj.into_iter().enumerate() {
            let mut list = list;
            list.sort_unstable();
            adj_edge[v] = list.iter().map(|&(_, e)| e).collect();
            sorted_adj.push(list.into_iter().map(|(w, _)| w).collect());
        }
        Ok(Graph { adj: sorted_adj, adj_edge, edges: norm })
    }

    /// Builds a graph from edges, silently dropping duplicates.
    pub fn from_edges_dedup(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut norm: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        norm.sort_unstable();
        norm.dedup();
        Graph::new(n, &norm)
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], adj_edge: vec![Vec::new(); n], edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge ids of the edges incident to `v`, in port order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.adj_edge[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let p = self.adj.get(u)?.binary_search(&v).ok()?;
        Some(self.adj_edge[u][p])
    }

    /// Port of `w` in the adjacency list of `v`.
    pub fn port_of(&self, v: usize, w: usize) -> Option<usize> {
        self.adj[v].binary_search(&w).ok()
    }

    /// Connected component label per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() + 1 == self.n() && self.is_connected()
    }

    /// BFS distances from `s` (`usize::MAX` for unreachable vertices).
    pub fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph keeping only the edges whose ids satisfy `keep`.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let edges: Vec<_> = (0..self.m()).filter(|&e| keep(e)).map(|e| self.edges[e]).collect();
        Graph::new(self.n(), &edges).expect("subgraph of a simple graph is simple")
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = std::collections::HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i);
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = index.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Graph::new(vertices.len(), &edges).expect("induced subgraph is simple")
    }
}

/// A tree together with a root, parent pointers and depths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    graph: Graph,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl RootedTree {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Children in ascending id order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Vertices in BFS order from the root; parents precede children.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        loop {
            if v == a {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }
}

/// Roots the tree `g` at `r` via BFS.
pub fn root_at(g: &Graph, r: usize) -> Result<RootedTree, GraphError> {
    if r >= g.n() {
        return Err(GraphError::VertexOutOfRange { v: r, n: g.n() });
    }
    if !g.is_tree() {
        return Err(GraphError::NotATree);
    }
    let n = g.n();
    let mut parent = vec![None; n];
    let mut depth = vec![0; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut children = vec![Vec::new(); n];
    seen[r] = true;
    order.push(r);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                depth[w] = depth[v] + 1;
                children[v].push(w);
                order.push(w);
            }
        }
    }
    Ok(RootedTree { graph: g.clone(), root: r, parent, depth, children, order })
}

/// Edge ids of `g` split into forests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    pub forests: Vec<Vec<usize>>,
}

impl ForestDecomposition {
    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    /// Forest index of every edge.
    pub fn forest_of_edge(&self, m: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; m];
        for (i, f) in self.forests.iter().enumerate() {
            for &e in f {
                of[e] = i;
            }
        }
        of
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Splits the edges into at most `target` forests.
///
/// Maximal spanning forests are peeled off the remaining edges one at a time.
/// Peeling carries no worst-case guarantee, so when it overshoots the budget
/// the degeneracy orientation is tried as well: every vertex sends its edges
/// towards later vertices in a smallest-last order, and the i-th such edge of
/// each vertex goes to forest i.
pub fn forest_decompose(g: &Graph, target: usize) -> Result<ForestDecomposition, GraphError> {
    let peeled = peel_spanning_forests(g);
    if peeled.len() <= target {
        return Ok(peeled);
    }
    let oriented = degeneracy_forests(g);
    if oriented.len() <= target {
        return Ok(oriented);
    }
    Err(GraphError::BudgetExceeded { target })
}

fn peel_spanning_forests(g: &Graph) -> ForestDecomposition {
    let mut remaining: Vec<usize> = (0..g.m()).collect();
    let mut forests = Vec::new();
    while !remaining.is_empty() {
        let mut dsu = Dsu::new(g.n());
        let mut forest = Vec::new();
        let mut rest = Vec::new();
        for e in remaining {
            let (u, v) = g.edge(e);
            if dsu.union(u, v) {
                forest.push(e);
            } else {
                rest.push(e);
            }
        }
        forests.push(forest);
        remaining = rest;
    }
    ForestDecomposition { forests }
}

fn degeneracy_forests(g: &Graph) -> ForestDecomposition {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut position = vec![0; n];
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); g.max_degree() + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut low = 0;
    for step in 0..n {
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("non-empty bucket");
            if !removed[v] && deg[v] == low {
                break v;
            }
        };
        removed[v] = true;
        position[v] = step;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                low = low.min(deg[w]);
            }
        }
    }
    let mut forests: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let mut slot = 0;
        for (p, &w) in g.neighbors(v).iter().enumerate() {
            if position[w] > position[v] {
                if forests.len() <= slot {
                    forests.push(Vec::new());
                }
                forests[slot].push(g.incident_edges(v)[p]);
                slot += 1;
            }
        }
    }
    for f in &mut forests {
        f.sort_unstable();
    }
    ForestDecomposition { forests }
}

/// Greedy coloring in ascending id order with colors `1..`.
pub fn greedy_chromatic_upper(g: &Graph) -> (usize, Vec<u32>) {
    let mut color = vec![0u32; g.n()];
    let mut used = Vec::new();
    for v in 0..g.n() {
        used.clear();
        used.extend(g.neighbors(v).iter().map(|&w| color[w]).filter(|&c| c > 0));
        used.sort_unstable();
        let mut c = 1;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        color[v] = c;
    }
    let count = color.iter().copied().max().unwrap_or(0) as usize;
    (count, color)
}

/// Whether `color` is proper on `g`; uncolored vertices (0) are ignored.
pub fn is_proper_coloring(g: &Graph, color: &[u32]) -> bool {
    g.edges().iter().all(|&(u, v)| color[u] == 0 || color[u] != color[v])
}
