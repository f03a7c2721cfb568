//! Maximal matching on forests, one forest after another.
//!
//! Each forest is rooted once during preprocessing and every vertex keeps
//! the port of its parent and its depth parity. A forest takes two phases of
//! three rounds. In phase `j` every unmatched vertex of parity `j` asks its
//! parent, a parent accepts the request with the lowest id, and newly
//! matched vertices tell all neighbors to drop their edges. A parent never
//! requests in the phase in which it accepts, so one phase cannot match a
//! vertex twice.

use super::{Matching, MmError, SubgraphInstance};
use crate::graph::{ForestDecomposition, Graph, RootedTree};
use crate::oracles::validate::is_maximal_matching;
use crate::sim::{
    bits_for, run_instance, run_preprocess, LocalInput, NodeContext, NodeProgram, Outbox, Payload, RunReport,
    SimError,
};
use std::collections::VecDeque;

const PHASE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmMsg {
    Request,
    Accept,
    /// The sender is matched; its edges are gone.
    Matched,
}

#[derive(Debug, Clone)]
pub struct ForestMatching {
    forests: Vec<Vec<usize>>,
    root: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct MmNode {
    /// Parent port and depth parity per forest.
    parents: Vec<Option<(usize, usize)>>,
    live: Vec<bool>,
    waiting: bool,
}

impl ForestMatching {
    /// Checks that `fd` splits the edges of `g` into forests.
    pub fn new(g: &Graph, fd: &ForestDecomposition) -> Result<Self, MmError> {
        let mut seen = vec![false; g.m()];
        for (i, f) in fd.forests.iter().enumerate() {
            let mut dsu: Vec<usize> = (0..g.n()).collect();
            fn find(d: &mut [usize], mut x: usize) -> usize {
                while d[x] != x {
                    d[x] = d[d[x]];
                    x = d[x];
                }
                x
            }
            for &e in f {
                if e >= g.m() {
                    return Err(MmError::InvalidDecomposition(format!("edge id {e} out of range")));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(MmError::InvalidDecomposition(format!("edge {e} appears twice")));
                }
                let (u, v) = g.edge(e);
                let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
                if a == b {
                    return Err(MmError::InvalidDecomposition(format!("forest {i} has a cycle through edge {e}")));
                }
                dsu[a] = b;
            }
        }
        if let Some(e) = seen.iter().position(|&s| !s) {
            return Err(MmError::InvalidDecomposition(format!("edge {e} is in no forest")));
        }
        Ok(ForestMatching { forests: fd.forests.clone(), root: None })
    }

    /// A single forest holding every edge of the tree, rooted at its root.
    pub fn tree(t: &RootedTree) -> Self {
        ForestMatching { forests: vec![(0..t.graph().m()).collect()], root: Some(t.root()) }
    }

    pub fn forest_count(&self) -> usize {
        self.forests.len()
    }

    /// Every vertex halts by this round.
    pub fn round_bound(&self) -> usize {
        (2 * PHASE * self.forests.len()).saturating_sub(1)
    }

    /// Parent and depth parity of every vertex in forest `f`. Components are
    /// rooted at their smallest vertex, or at the tree root when one is set.
    fn root_forest(&self, g: &Graph, f: usize) -> Vec<Option<(usize, usize)>> {
        let mut adj = vec![Vec::new(); g.n()];
        for &e in &self.forests[f] {
            let (u, v) = g.edge(e);
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        let starts = self.root.into_iter().chain(0..g.n());
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([(s, 0usize)]);
            while let Some((v, d)) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, (d + 1) % 2));
                        queue.push_back((w, d + 1));
                    }
                }
            }
        }
        parent
    }

    /// Handles one round; requests go out in rounds `0, 3, 6, ...`.
    fn step(
        &self,
        ctx: &NodeContext,
        st: &mut MmNode,
        round: usize,
        inbox: &[(usize, MmMsg)],
        out: &mut Outbox<MmMsg>,
    ) -> Option<Option<usize>> {
        let mut requests = Vec::new();
        let mut accepted = None;
        for &(port, m) in inbox {
            match m {
                MmMsg::Matched => st.live[port] = false,
                MmMsg::Request => requests.push(port),
                MmMsg::Accept => accepted = Some(port),
            }
        }
        let matched = accepted.or_else(|| requests.iter().copied().find(|&p| st.live[p]));
        if let Some(port) = matched {
            for q in 0..ctx.degree() {
                out.send(q, if q == port && accepted.is_none() { MmMsg::Accept } else { MmMsg::Matched });
            }
            return Some(Some(ctx.neighbor(port)));
        }
        if accepted.is_none() && st.waiting && round % PHASE == 2 {
            st.waiting = false;
        }
        if round.is_multiple_of(PHASE) {
            let f = round / (2 * PHASE);
            let j = (round / PHASE) % 2;
            if let Some(Some((port, parity))) = st.parents.get(f) {
                if *parity == j && st.live[*port] {
                    out.send(*port, MmMsg::Request);
                    st.waiting = true;
                }
            }
        }
        if round >= self.round_bound() || (!st.waiting && !st.live.contains(&true)) {
            return Some(None);
        }
        None
    }
}

impl NodeProgram for ForestMatching {
    type State = MmNode;
    type Msg = MmMsg;
    /// Partner id, `None` if unmatched.
    type Output = Option<usize>;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        let rooted: Vec<_> = (0..self.forests.len()).map(|f| self.root_forest(g, f)).collect();
        Ok((0..g.n())
            .map(|v| {
                let width = bits_for(g.degree(v));
                let mut p = Payload::new();
                for parents in &rooted {
                    match parents[v] {
                        Some((w, parity)) => {
                            p.push(1, 1);
                            p.push(parity as u64, 1);
                            p.push(g.port_of(v, w).expect("forest edge is a graph edge") as u64, width);
                        }
                        None => p.push(0, 1),
                    }
                }
                p
            })
            .collect())
    }

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<MmMsg>,
    ) -> (MmNode, Option<Option<usize>>) {
        let width = bits_for(ctx.degree());
        let mut reader = payload.reader();
        let parents = (0..self.forests.len())
            .map(|_| {
                (reader.take(1) == 1).then(|| {
                    let parity = reader.take(1) as usize;
                    (reader.take(width) as usize, parity)
                })
            })
            .collect();
        let live = input.active_ports().map_or_else(|| vec![true; ctx.degree()], <[bool]>::to_vec);
        let mut st = MmNode { parents, live, waiting: false };
        let output = self.step(ctx, &mut st, 0, &[], out);
        (st, output)
    }

    fn on_round(
        &self,
        ctx: &NodeContext,
        st: &mut MmNode,
        round: usize,
        inbox: &[(usize, MmMsg)],
        out: &mut Outbox<MmMsg>,
    ) -> Option<Option<usize>> {
        self.step(ctx, st, round, inbox, out)
    }
}

fn run(
    g: &Graph,
    prog: &ForestMatching,
    inst: &SubgraphInstance,
) -> Result<(Matching, RunReport<Option<usize>>), MmError> {
    if inst.active.len() != g.m() {
        return Err(MmError::MaskLength { got: inst.active.len(), expected: g.m() });
    }
    let pre = run_preprocess(g, prog)?;
    let mut report = run_instance(g, &pre, prog, &inst.to_instance(), prog.round_bound())?;
    let matching = Matching { partner: report.unwrap_outputs() };
    report.valid = Some(is_maximal_matching(g, &inst.active, &matching.partner));
    Ok((matching, report))
}

/// Maximal matching of the active edges of a tree in at most six rounds.
pub fn mm_tree(t: &RootedTree, inst: &SubgraphInstance) -> Result<(Matching, RunReport<Option<usize>>), MmError> {
    run(t.graph(), &ForestMatching::tree(t), inst)
}

/// Maximal matching with one pair of phases per forest of `fd`.
pub fn mm_arboricity(
    g: &Graph,
    fd: &ForestDecomposition,
    inst: &SubgraphInstance,
) -> Result<(Matching, RunReport<Option<usize>>), MmError> {
    run(g, &ForestMatching::new(g, fd)?, inst)
}
