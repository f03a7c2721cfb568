use crate::cds_tree::{CdsInstance, DominatingSet};
use crate::graph::Graph;
use crate::sim::{BallGather, LocalInput, NodeContext, NodeProgram, Outbox, Payload, SimError};
use std::collections::{BTreeMap, HashMap};

/// What the algorithm reads about the graph. Implemented by the full graph
/// and by a node's gathered neighborhood.
pub trait LocalView {
    fn neighbors(&self, v: usize) -> &[usize];
    fn is_client(&self, v: usize) -> bool;
}

struct Whole<'a> {
    g: &'a Graph,
    clients: &'a [bool],
}

impl LocalView for Whole<'_> {
    fn neighbors(&self, v: usize) -> &[usize] {
        self.g.neighbors(v)
    }

    fn is_client(&self, v: usize) -> bool {
        self.clients[v]
    }
}

fn client_nbrs(view: &impl LocalView, v: usize) -> Vec<usize> {
    view.neighbors(v).iter().copied().filter(|&w| view.is_client(w)).collect()
}

/// Searches for at most three vertices other than `v` that dominate every
/// client neighbor of `v`. Any such vertex is within distance 2 of `v`.
fn cover_witness(view: &impl LocalView, v: usize) -> Option<Vec<usize>> {
    fn go(view: &impl LocalView, v: usize, targets: &[usize], chosen: &mut Vec<usize>) -> bool {
        // read adjacency from the client side: its record is always in view
        let covered = |c: usize, chosen: &[usize]| chosen.iter().any(|&a| a == c || view.neighbors(c).contains(&a));
        let Some(&c) = targets.iter().find(|&&c| !covered(c, chosen)) else {
            return true;
        };
        if chosen.len() == 3 {
            return false;
        }
        let mut cands: Vec<usize> = std::iter::once(c).chain(view.neighbors(c).iter().copied()).filter(|&u| u != v).collect();
        cands.sort_unstable();
        for u in cands {
            chosen.push(u);
            if go(view, v, targets, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let targets = client_nbrs(view, v);
    let mut chosen = Vec::new();
    go(view, v, &targets, &mut chosen).then_some(chosen)
}

fn in_d1(view: &impl LocalView, v: usize) -> bool {
    cover_witness(view, v).is_none()
}

/// Vertices outside `D1` sharing at least 10 client neighbors with `v`.
fn b_set(view: &impl LocalView, v: usize, d1: &mut impl FnMut(usize) -> bool) -> Vec<usize> {
    let mut common: HashMap<usize, usize> = HashMap::new();
    for c in client_nbrs(view, v) {
        for &w in view.neighbors(c) {
            if w != v {
                *common.entry(w).or_default() += 1;
            }
        }
    }
    let mut out: Vec<usize> = common.into_iter().filter(|&(w, k)| k >= 10 && !d1(w)).map(|(w, _)| w).collect();
    out.sort_unstable();
    out
}

/// The three parts of the output with the cover witnesses of non-`D1` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approx39Parts {
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    pub d3: Vec<usize>,
    /// For each vertex outside `D1`, at most three vertices other than it
    /// dominating its client neighbors.
    pub witness: BTreeMap<usize, Vec<usize>>,
}

impl Approx39Parts {
    pub fn into_set(&self, n: usize) -> DominatingSet {
        DominatingSet::from_vertices(n, self.d1.iter().chain(&self.d2).chain(&self.d3).copied())
    }
}

pub fn approx39_parts(g: &Graph, inst: &CdsInstance) -> Approx39Parts {
    let view = Whole { g, clients: &inst.clients };
    let n = g.n();
    let mut witness = BTreeMap::new();
    let mut d1 = vec![false; n];
    for v in 0..n {
        match cover_witness(&view, v) {
            Some(a) => {
                witness.insert(v, a);
            }
            None => d1[v] = true,
        }
    }
    let d2: Vec<usize> = (0..n).filter(|&v| !d1[v] && !b_set(&view, v, &mut |w| d1[w]).is_empty()).collect();
    let mut top = d1.clone();
    for &v in &d2 {
        top[v] = true;
    }
    let d3 = (0..n)
        .filter(|&c| inst.clients[c] && !top[c] && !g.neighbors(c).iter().any(|&w| top[w]))
        .collect();
    Approx39Parts { d1: (0..n).filter(|&v| d1[v]).collect(), d2, d3, witness }
}

pub fn approx39(g: &Graph, inst: &CdsInstance) -> DominatingSet {
    approx39_parts(g, inst).into_set(g.n())
}

/// Radius of the neighborhood a node gathers before deciding.
pub const APPROX39_RADIUS: usize = 4;

/// Membership of a single vertex decided from what it can see.
fn decide(view: &impl LocalView, v: usize) -> bool {
    let mut memo: HashMap<usize, bool> = HashMap::new();
    let mut d1 = |w: usize| *memo.entry(w).or_insert_with(|| in_d1(view, w));
    if d1(v) {
        return true;
    }
    let in_top = |u: usize, d1: &mut dyn FnMut(usize) -> bool| d1(u) || !b_set(view, u, &mut |w| d1(w)).is_empty();
    if in_top(v, &mut d1) {
        return true;
    }
    if !view.is_client(v) {
        return false;
    }
    let nbrs: Vec<usize> = view.neighbors(v).to_vec();
    !nbrs.into_iter().any(|u| in_top(u, &mut d1))
}

#[derive(Debug, Clone)]
pub struct Record {
    client: bool,
    adj: Vec<usize>,
}

struct Ball<'a> {
    known: &'a BTreeMap<usize, Record>,
}

impl LocalView for Ball<'_> {
    fn neighbors(&self, v: usize) -> &[usize] {
        self.known.get(&v).map(|r| r.adj.as_slice()).unwrap_or(&[])
    }

    fn is_client(&self, v: usize) -> bool {
        self.known.get(&v).is_some_and(|r| r.client)
    }
}

/// Distributed form: gather the radius-4 ball, then decide locally.
/// Needs no preprocessing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Approx39Program;

impl NodeProgram for Approx39Program {
    type State = BallGather<Record>;
    type Msg = Vec<(usize, Record)>;
    type Output = bool;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        Ok(vec![Payload::new(); g.n()])
    }

    fn init(&self, ctx: &NodeContext, _: &Payload, input: &LocalInput, out: &mut Outbox<Self::Msg>) -> (Self::State, Option<bool>) {
        let mut gather = BallGather::new(ctx.id, Record { client: input.is_client(), adj: ctx.neighbors().to_vec() });
        gather.send(out);
        (gather, None)
    }

    fn on_round(
        &self,
        ctx: &NodeContext,
        gather: &mut Self::State,
        round: usize,
        inbox: &[(usize, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Option<bool> {
        gather.receive(inbox);
        if round < APPROX39_RADIUS {
            gather.send(out);
            return None;
        }
        let known = gather.known();
        out.charge(known.len() as u64);
        Some(decide(&Ball { known }, ctx.id))
    }
}
