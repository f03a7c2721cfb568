//! The label digraph `G_d` and the constant-round criterion.
//!
//! Vertices are ordered label pairs `(a, b)`, numbered `a * |Σ| + b`, and
//! `(a, b) → (b, c)` whenever the triple `(a, b, c)` is allowed. A labelling
//! of a path with `n ≥ 2` vertices is valid exactly when its consecutive
//! pairs form a walk from a start vertex to a terminal vertex.

use super::{Label, LclError, LclSpec};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDigraph {
    sigma: usize,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    starts: Vec<bool>,
    terminals: Vec<bool>,
    singletons: Vec<bool>,
}

impl LabelDigraph {
    pub fn new(spec: &LclSpec) -> Self {
        let sigma = spec.sigma();
        let alpha = sigma * sigma;
        let id = |a: Label, b: Label| a as usize * sigma + b as usize;
        let mut out = vec![Vec::new(); alpha];
        let mut inc = vec![Vec::new(); alpha];
        // triples iterate in lexicographic order, so adjacency comes out sorted
        for &(a, b, c) in &spec.triples {
            out[id(a, b)].push(id(b, c));
        }
        for u in 0..alpha {
            for &w in &out[u] {
                inc[w].push(u);
            }
        }
        let mut starts = vec![false; alpha];
        let mut terminals = vec![false; alpha];
        for &(a, b) in &spec.pairs {
            starts[id(a, b)] = true;
            terminals[id(b, a)] = true;
        }
        let singletons = (0..sigma).map(|a| spec.singletons.contains(&(a as Label))).collect();
        LabelDigraph { sigma, out, inc, starts, terminals, singletons }
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// `α = |Σ_out|²`, the number of vertices.
    pub fn alpha(&self) -> usize {
        self.sigma * self.sigma
    }

    pub fn vertex(&self, a: Label, b: Label) -> usize {
        a as usize * self.sigma + b as usize
    }

    pub fn pair(&self, v: usize) -> (Label, Label) {
        ((v / self.sigma) as Label, (v % self.sigma) as Label)
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_start(&self, v: usize) -> bool {
        self.starts[v]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals[v]
    }

    pub fn starts(&self) -> Vec<usize> {
        (0..self.alpha()).filter(|&v| self.starts[v]).collect()
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.alpha()).filter(|&v| self.terminals[v]).collect()
    }

    /// Walk check: the pairs of `labels` trace a walk from `S` to `T`.
    pub fn accepts(&self, labels: &[Label]) -> bool {
        if labels.iter().any(|&l| l as usize >= self.sigma) {
            return false;
        }
        match labels.len() {
            0 => true,
            1 => self.singletons[labels[0] as usize],
            _ => {
                let walk: Vec<usize> = labels.windows(2).map(|w| self.vertex(w[0], w[1])).collect();
                self.starts[walk[0]]
                    && self.terminals[walk[walk.len() - 1]]
                    && walk.windows(2).all(|e| self.has_edge(e[0], e[1]))
            }
        }
    }

    /// Number of valid labellings of a path with `n` vertices.
    pub fn count_walks(&self, n: usize) -> u128 {
        match n {
            0 => 1,
            1 => self.singletons.iter().filter(|&&s| s).count() as u128,
            _ => {
                let mut cur: Vec<u128> = self.starts.iter().map(|&s| s as u128).collect();
                for _ in 0..n - 2 {
                    let mut next = vec![0u128; self.alpha()];
                    for (u, &c) in cur.iter().enumerate() {
                        if c > 0 {
                            for &w in &self.out[u] {
                                next[w] = next[w].saturating_add(c);
                            }
                        }
                    }
                    cur = next;
                }
                (0..self.alpha()).filter(|&v| self.terminals[v]).map(|v| cur[v]).fold(0, u128::saturating_add)
            }
        }
    }

    /// Whether some labelling of a path with `n` vertices is valid.
    pub fn feasible(&self, n: usize) -> bool {
        match n {
            0 => true,
            1 => self.singletons.iter().any(|&s| s),
            _ => {
                let bwd = Layers::build(&self.inc, &self.terminals, n - 2);
                (0..self.alpha()).any(|v| self.starts[v] && bwd.contains(v, n - 2))
            }
        }
    }

    /// Lexicographically smallest valid labelling of a path with `n` vertices.
    pub fn smallest_labelling(&self, n: usize) -> Option<Vec<Label>> {
        match n {
            0 => Some(Vec::new()),
            1 => self.singletons.iter().position(|&s| s).map(|a| vec![a as Label]),
            _ => {
                let bwd = Layers::build(&self.inc, &self.terminals, n - 2);
                self.smallest_with(&bwd, n)
            }
        }
    }

    fn smallest_with(&self, bwd: &Layers, n: usize) -> Option<Vec<Label>> {
        let mut cur = (0..self.alpha()).find(|&v| self.starts[v] && bwd.contains(v, n - 2))?;
        let (a, b) = self.pair(cur);
        let mut labels = vec![a, b];
        for left in (0..n - 2).rev() {
            cur = *self.out[cur].iter().find(|&&w| bwd.contains(w, left))?;
            labels.push(self.pair(cur).1);
        }
        Some(labels)
    }
}

/// Reachable sets by exact walk length `0..=cap`. Layers repeat once a set
/// recurs, so only the prefix before the first repetition is stored.
#[derive(Debug, Clone)]
pub(crate) struct Layers {
    layers: Vec<Vec<bool>>,
    /// First index of the repeating part; meaningful when `period > 0`.
    pre: usize,
    period: usize,
    cap: usize,
}

impl Layers {
    pub(crate) fn build(adj: &[Vec<usize>], sources: &[bool], cap: usize) -> Self {
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut layers = Vec::new();
        let mut cur = sources.to_vec();
        let (mut pre, mut period) = (0, 0);
        for j in 0..=cap {
            if let Some(&i) = seen.get(&cur) {
                pre = i;
                period = j - i;
                break;
            }
            seen.insert(cur.clone(), j);
            let mut next = vec![false; cur.len()];
            for (u, _) in cur.iter().enumerate().filter(|(_, &b)| b) {
                for &w in &adj[u] {
                    next[w] = true;
                }
            }
            layers.push(std::mem::replace(&mut cur, next));
        }
        Layers { layers, pre, period, cap }
    }

    fn layer(&self, len: usize) -> &[bool] {
        if self.period > 0 && len >= self.layers.len() {
            &self.layers[self.pre + (len - self.pre) % self.period]
        } else {
            &self.layers[len]
        }
    }

    pub(crate) fn contains(&self, u: usize, len: usize) -> bool {
        len <= self.cap && self.layer(len)[u]
    }

    /// Shortest length `≤ cap` in each residue class mod `k` at which `u` is reached.
    fn shortest_by_residue(&self, u: usize, k: usize) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; k];
        let mut offer = |len: usize| {
            let slot = &mut best[len % k];
            if slot.is_none_or(|b| len < b) {
                *slot = Some(len);
            }
        };
        for (len, layer) in self.layers.iter().enumerate() {
            if layer[u] {
                offer(len);
            }
        }
        if self.period > 0 {
            // beyond the stored prefix the layers cycle; k turns of the
            // period already visit every residue reachable that way
            for q in 0..self.period {
                let base = self.pre + q;
                if !self.layers[base][u] {
                    continue;
                }
                for t in 1..=k {
                    let len = base + t * self.period;
                    if len > self.cap {
                        break;
                    }
                    offer(len);
                }
            }
        }
        best
    }
}

/// Shortest witnesses for one candidate `(k, v)`: a closed walk of length `k`
/// through `v`, and per residue class the shortest walks `S → v` and `v → T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkTables {
    pub k: usize,
    pub v: usize,
    pub left_residues: Vec<usize>,
    pub right_residues: Vec<usize>,
    /// `left[r]` is a vertex sequence of a walk from `S` to `v` with length `≡ r (mod k)`.
    pub left: Vec<Option<Vec<usize>>>,
    /// `right[r]` walks from `v` to `T`.
    pub right: Vec<Option<Vec<usize>>>,
}

impl WalkTables {
    pub fn is_full(&self) -> bool {
        self.left_residues.len() == self.k && self.right_residues.len() == self.k
    }
}

/// Layered reachability from `S` and to `T` up to a walk-length cap.
#[derive(Debug, Clone)]
pub struct Walkspans<'a> {
    dg: &'a LabelDigraph,
    pub cap: usize,
    fwd: Layers,
    bwd: Layers,
    /// `closed[v][j]`: a closed walk of length `j` passes through `v`.
    closed: Vec<Vec<bool>>,
}

impl<'a> Walkspans<'a> {
    pub fn new(dg: &'a LabelDigraph, cap: usize) -> Self {
        let alpha = dg.alpha();
        let fwd = Layers::build(&dg.out, &dg.starts, cap);
        let bwd = Layers::build(&dg.inc, &dg.terminals, cap);
        let closed = (0..alpha)
            .map(|v| {
                let mut src = vec![false; alpha];
                src[v] = true;
                let from_v = Layers::build(&dg.out, &src, alpha);
                (0..=alpha).map(|j| j > 0 && from_v.contains(v, j)).collect()
            })
            .collect();
        Walkspans { dg, cap, fwd, bwd, closed }
    }

    /// Every `(k, v)` with `1 ≤ k ≤ α` and a closed walk of length `k`
    /// through `v`, in lexicographic order.
    pub fn candidates(&self) -> Vec<(usize, usize)> {
        let alpha = self.dg.alpha();
        (1..=alpha).flat_map(|k| (0..alpha).filter(move |&v| self.closed[v][k]).map(move |v| (k, v))).collect()
    }

    /// Residues mod `k` of walk lengths from `S` to `v`, up to the cap.
    pub fn residues_from_starts(&self, v: usize, k: usize) -> Vec<usize> {
        present(&self.fwd.shortest_by_residue(v, k))
    }

    pub fn residues_to_terminals(&self, v: usize, k: usize) -> Vec<usize> {
        present(&self.bwd.shortest_by_residue(v, k))
    }

    pub fn tables(&self, k: usize, v: usize) -> WalkTables {
        let left_len = self.fwd.shortest_by_residue(v, k);
        let right_len = self.bwd.shortest_by_residue(v, k);
        WalkTables {
            k,
            v,
            left_residues: present(&left_len),
            right_residues: present(&right_len),
            left: left_len.iter().map(|l| l.map(|len| self.walk_from_starts(v, len))).collect(),
            right: right_len.iter().map(|l| l.map(|len| self.walk_to_terminals(v, len))).collect(),
        }
    }

    /// Residue test without building witnesses.
    pub fn satisfies(&self, k: usize, v: usize) -> bool {
        self.fwd.shortest_by_residue(v, k).iter().all(Option::is_some)
            && self.bwd.shortest_by_residue(v, k).iter().all(Option::is_some)
    }

    /// Walk of exactly `len` edges from `S` to `v`, taking the smallest
    /// predecessor at each step.
    fn walk_from_starts(&self, v: usize, len: usize) -> Vec<usize> {
        let mut walk = vec![v];
        let mut cur = v;
        for s in (0..len).rev() {
            cur = *self.dg.inc[cur].iter().find(|&&u| self.fwd.contains(u, s)).expect("layer is consistent");
            walk.push(cur);
        }
        walk.reverse();
        walk
    }

    fn walk_to_terminals(&self, v: usize, len: usize) -> Vec<usize> {
        let mut walk = vec![v];
        let mut cur = v;
        for s in (0..len).rev() {
            cur = *self.dg.out[cur].iter().find(|&&w| self.bwd.contains(w, s)).expect("layer is consistent");
            walk.push(cur);
        }
        walk
    }

    /// Closed walk `v → … → v` of length `k`.
    pub fn closed_walk(&self, k: usize, v: usize) -> Option<Vec<usize>> {
        if k == 0 || k >= self.closed[v].len() || !self.closed[v][k] {
            return None;
        }
        let alpha = self.dg.alpha();
        let mut src = vec![false; alpha];
        src[v] = true;
        let from_v = Layers::build(&self.dg.out, &src, k);
        let mut walk = vec![v];
        let mut cur = v;
        for s in (0..k).rev() {
            cur = *self.dg.inc[cur].iter().find(|&&u| from_v.contains(u, s)).expect("layer is consistent");
            walk.push(cur);
        }
        walk.reverse();
        Some(walk)
    }
}

fn present(lens: &[Option<usize>]) -> Vec<usize> {
    lens.iter().enumerate().filter(|(_, l)| l.is_some()).map(|(r, _)| r).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Complexity {
    Theta1,
    ThetaN,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub v: usize,
    /// Closed walk of length `k` starting and ending at `v`.
    pub cycle: Vec<usize>,
    pub tables: WalkTables,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub complexity: Complexity,
    pub cap: usize,
    pub witness: Option<Witness>,
}

impl Classification {
    /// Longest witness walk (edges) on the left and right.
    pub fn witness_lengths(&self) -> Option<(usize, usize)> {
        self.witness.as_ref().map(|w| {
            let longest = |side: &[Option<Vec<usize>>]| side.iter().flatten().map(|x| x.len() - 1).max().unwrap_or(0);
            (longest(&w.tables.left), longest(&w.tables.right))
        })
    }
}

/// Classifies with the default walk cap `2α²`.
pub fn classify(spec: &LclSpec) -> Result<Classification, LclError> {
    let alpha = spec.sigma() * spec.sigma();
    classify_with_cap(spec, 2 * alpha * alpha)
}

/// Picks the lexicographically smallest `(k, v)` meeting the residue
/// criterion with walks of length at most `cap`.
pub fn classify_with_cap(spec: &LclSpec, cap: usize) -> Result<Classification, LclError> {
    if spec.sigma_in.len() > 1 {
        return Err(LclError::InputLabels(spec.sigma_in.len()));
    }
    let dg = spec.digraph();
    let spans = Walkspans::new(&dg, cap);
    let witness = spans.candidates().into_iter().find(|&(k, v)| spans.satisfies(k, v)).map(|(k, v)| Witness {
        k,
        v,
        cycle: spans.closed_walk(k, v).expect("candidate has a closed walk"),
        tables: spans.tables(k, v),
    });
    let complexity = if witness.is_some() { Complexity::Theta1 } else { Complexity::ThetaN };
    Ok(Classification { complexity, cap, witness })
}
