//! Maximal independent sets on edge-subset instances.

use super::{MmError, SubgraphInstance};
use crate::graph::Graph;
use crate::oracles::validate::is_maximal_independent;
use crate::sim::{
    bits_for, run_instance, run_preprocess, LocalInput, NodeContext, NodeProgram, Outbox, Payload, RunReport,
    SimError,
};

/// An online MIS algorithm for edge-subset instances that halts within a
/// known number of rounds.
///
/// Inside [`MisSplit`] some neighbors sit a phase out. They send nothing and
/// drop what they receive, and an implementation must read that silence as
/// the neighbor being absent.
pub trait SubgraphMis: NodeProgram<Output = bool> {
    fn round_bound(&self) -> usize;
}

fn active_of(input: &LocalInput, degree: usize) -> Vec<bool> {
    input.active_ports().map_or_else(|| vec![true; degree], <[bool]>::to_vec)
}

/// For graphs without edges: everybody joins at once.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgelessMis;

impl NodeProgram for EdgelessMis {
    type State = ();
    type Msg = ();
    type Output = bool;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        Ok(vec![Payload::new(); g.n()])
    }

    fn init(&self, _: &NodeContext, _: &Payload, _: &LocalInput, _: &mut Outbox<()>) -> ((), Option<bool>) {
        ((), Some(true))
    }

    fn on_round(&self, _: &NodeContext, _: &mut (), _: usize, _: &[(usize, ())], _: &mut Outbox<()>) -> Option<bool> {
        Some(true)
    }
}

impl SubgraphMis for EdgelessMis {
    fn round_bound(&self) -> usize {
        0
    }
}

/// For disjoint unions of cliques: the lowest id of each clique joins.
/// Round 0 announces who takes part.
#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueMis;

impl NodeProgram for CliqueMis {
    type State = ();
    type Msg = ();
    type Output = bool;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        Ok(vec![Payload::new(); g.n()])
    }

    fn init(&self, ctx: &NodeContext, _: &Payload, input: &LocalInput, out: &mut Outbox<()>) -> ((), Option<bool>) {
        let active = active_of(input, ctx.degree());
        if !active.contains(&true) {
            return ((), Some(true));
        }
        for (port, _) in active.iter().enumerate().filter(|(_, &a)| a) {
            out.send(port, ());
        }
        ((), None)
    }

    fn on_round(
        &self,
        ctx: &NodeContext,
        _: &mut (),
        _: usize,
        inbox: &[(usize, ())],
        _: &mut Outbox<()>,
    ) -> Option<bool> {
        Some(inbox.iter().all(|&(port, _)| ctx.id < ctx.neighbor(port)))
    }
}

impl SubgraphMis for CliqueMis {
    fn round_bound(&self) -> usize {
        1
    }
}

/// Color `c` decides in round `c - 1`: it joins unless an active neighbor
/// already has, and tells its active neighbors when it does.
#[derive(Debug, Clone)]
pub struct ColorMis {
    colors: Vec<u32>,
    max: u32,
}

impl ColorMis {
    /// `colors` must be a proper coloring of `g` with colors `1..`.
    pub fn new(g: &Graph, colors: Vec<u32>) -> Result<Self, MmError> {
        if colors.len() != g.n() {
            return Err(MmError::InvalidColoring(format!("{} colors for {} vertices", colors.len(), g.n())));
        }
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return Err(MmError::InvalidColoring(format!("vertex {v} has color 0")));
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| colors[u] == colors[v]) {
            return Err(MmError::InvalidColoring(format!("edge ({u}, {v}) has both ends colored {}", colors[u])));
        }
        let max = colors.iter().copied().max().unwrap_or(1);
        Ok(ColorMis { colors, max })
    }

    pub fn color_count(&self) -> u32 {
        self.max
    }

    fn join(active: &[bool], out: &mut Outbox<()>) -> Option<bool> {
        for (port, _) in active.iter().enumerate().filter(|(_, &a)| a) {
            out.send(port, ());
        }
        Some(true)
    }
}

#[derive(Debug)]
pub struct ColorNode {
    color: u32,
    active: Vec<bool>,
}

impl NodeProgram for ColorMis {
    type State = ColorNode;
    /// "I joined."
    type Msg = ();
    type Output = bool;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        if g.n() != self.colors.len() {
            return Err(SimError::Preprocess { vertex: None, msg: "coloring is for another graph".into() });
        }
        let width = bits_for(self.max as usize);
        Ok(self.colors.iter().map(|&c| Payload::new().with(c as u64 - 1, width)).collect())
    }

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<()>,
    ) -> (ColorNode, Option<bool>) {
        let color = payload.read(0, bits_for(self.max as usize)) as u32 + 1;
        let active = active_of(input, ctx.degree());
        let output = if color == 1 || !active.contains(&true) { ColorMis::join(&active, out) } else { None };
        (ColorNode { color, active }, output)
    }

    fn on_round(
        &self,
        _: &NodeContext,
        st: &mut ColorNode,
        round: usize,
        inbox: &[(usize, ())],
        out: &mut Outbox<()>,
    ) -> Option<bool> {
        if inbox.iter().any(|&(port, _)| st.active[port]) {
            return Some(false);
        }
        (round + 1 >= st.color as usize).then(|| ColorMis::join(&st.active, out)).flatten()
    }
}

impl SubgraphMis for ColorMis {
    fn round_bound(&self) -> usize {
        self.max as usize - 1
    }
}

fn finish(g: &Graph, inst: &SubgraphInstance, mut report: RunReport<bool>) -> (Vec<bool>, RunReport<bool>) {
    let set = report.unwrap_outputs();
    report.valid = Some(is_maximal_independent(g, &inst.active, &set));
    (set, report)
}

/// MIS of the active subgraph in fewer rounds than there are colors.
pub fn mis_by_coloring(
    g: &Graph,
    colors: &[u32],
    inst: &SubgraphInstance,
) -> Result<(Vec<bool>, RunReport<bool>), MmError> {
    let prog = ColorMis::new(g, colors.to_vec())?;
    if inst.active.len() != g.m() {
        return Err(MmError::MaskLength { got: inst.active.len(), expected: g.m() });
    }
    let pre = run_preprocess(g, &prog)?;
    let report = run_instance(g, &pre, &prog, &inst.to_instance(), prog.round_bound())?;
    Ok(finish(g, inst, report))
}

#[derive(Debug, Clone)]
pub enum SplitMsg<M> {
    Join,
    Inner(M),
}

/// Extends an independent set part by part over a cover `V_1..V_k`.
///
/// Phase `i` starts in round `(T+1)(i-1)`. Members of `V_i` that no earlier
/// phase dominated run the inner algorithm on `G[V_i]`, and whoever joins
/// announces it to its active neighbors in time for the next phase. A
/// vertex may sit in several parts; it takes part in the first phase that
/// finds it undominated.
#[derive(Debug, Clone)]
pub struct MisSplit<P> {
    inner: P,
    member: Vec<Vec<bool>>,
    t: usize,
}

pub struct PartView {
    neighbors: Vec<usize>,
    ports: Vec<usize>,
    payload: Payload,
}

pub struct SplitNode<S> {
    parts: Vec<Option<PartView>>,
    active: Vec<bool>,
    dominated: bool,
    running: Option<(usize, S)>,
}

impl<P: SubgraphMis> MisSplit<P> {
    pub fn new(g: &Graph, cover: &[Vec<usize>], inner: P) -> Result<Self, MmError> {
        let mut member = vec![vec![false; g.n()]; cover.len()];
        for (i, part) in cover.iter().enumerate() {
            for &v in part {
                if v >= g.n() {
                    return Err(MmError::InvalidCover(format!("vertex {v} of part {i} is out of range")));
                }
                member[i][v] = true;
            }
        }
        if let Some(v) = (0..g.n()).find(|&v| !member.iter().any(|m| m[v])) {
            return Err(MmError::InvalidCover(format!("vertex {v} is in no part")));
        }
        let t = inner.round_bound();
        Ok(MisSplit { inner, member, t })
    }

    pub fn parts(&self) -> usize {
        self.member.len()
    }

    /// `T k + k - 1`.
    pub fn round_bound(&self) -> usize {
        (self.t * self.parts() + self.parts()).saturating_sub(1)
    }

    fn start(&self, phase: usize) -> usize {
        phase * (self.t + 1)
    }

    /// Feeds one inner step through and reacts to its output.
    fn after_inner(
        st: &mut SplitNode<P::State>,
        phase: usize,
        inner_out: Outbox<P::Msg>,
        output: Option<bool>,
        out: &mut Outbox<SplitMsg<P::Msg>>,
    ) -> Option<bool> {
        let view = st.parts[phase].as_ref().expect("running phase has a view");
        let (msgs, work) = inner_out.into_parts();
        out.charge(work);
        for (q, m) in msgs {
            out.send(view.ports[q], SplitMsg::Inner(m));
        }
        match output {
            Some(true) => {
                for (port, _) in st.active.iter().enumerate().filter(|(_, &a)| a) {
                    out.send(port, SplitMsg::Join);
                }
                Some(true)
            }
            Some(false) => {
                st.running = None;
                None
            }
            None => None,
        }
    }

    fn step(
        &self,
        ctx: &NodeContext,
        st: &mut SplitNode<P::State>,
        round: usize,
        inbox: &[(usize, SplitMsg<P::Msg>)],
        out: &mut Outbox<SplitMsg<P::Msg>>,
    ) -> Option<bool> {
        let n = P::USES_N.then(|| ctx.n());
        let mut inner_inbox = Vec::new();
        for (port, m) in inbox {
            match m {
                SplitMsg::Join => st.dominated |= st.active[*port],
                SplitMsg::Inner(m) => inner_inbox.push((*port, m.clone())),
            }
        }
        if let Some((phase, mut state)) = st.running.take() {
            let view = st.parts[phase].as_ref().expect("running phase has a view");
            let msgs: Vec<(usize, P::Msg)> = inner_inbox
                .into_iter()
                .filter_map(|(port, m)| view.ports.iter().position(|&q| q == port).map(|q| (q, m)))
                .collect();
            let ictx = NodeContext::new(ctx.id, &view.neighbors, n);
            let mut inner_out = Outbox::new(view.neighbors.len());
            let output = self.inner.on_round(&ictx, &mut state, round - self.start(phase), &msgs, &mut inner_out);
            st.running = Some((phase, state));
            if let Some(done) = Self::after_inner(st, phase, inner_out, output, out) {
                return Some(done);
            }
            // an inner run that overstays its bound counts as not joining
            if round >= self.start(phase) + self.t {
                st.running = None;
            }
        } else if !st.dominated && round.is_multiple_of(self.t + 1) && round / (self.t + 1) < self.parts() {
            let phase = round / (self.t + 1);
            if let Some(view) = &st.parts[phase] {
                let ictx = NodeContext::new(ctx.id, &view.neighbors, n);
                let input = LocalInput::ActivePorts(view.ports.iter().map(|&q| st.active[q]).collect());
                let mut inner_out = Outbox::new(view.neighbors.len());
                let (state, output) = self.inner.init(&ictx, &view.payload, &input, &mut inner_out);
                st.running = Some((phase, state));
                if let Some(done) = Self::after_inner(st, phase, inner_out, output, out) {
                    return Some(done);
                }
                if self.t == 0 {
                    st.running = None;
                }
            }
        }
        if st.running.is_none() && (st.dominated || round >= self.round_bound()) {
            return Some(false);
        }
        None
    }
}

impl<P: SubgraphMis> NodeProgram for MisSplit<P> {
    type State = SplitNode<P::State>;
    type Msg = SplitMsg<P::Msg>;
    type Output = bool;
    const USES_N: bool = P::USES_N;

    /// Per part: a membership bit, then for members one bit per port marking
    /// neighbors in the same part and the inner payload behind a 32-bit length.
    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        let mut payloads = vec![Payload::new(); g.n()];
        for member in &self.member {
            let sub = g.edge_subgraph(|e| {
                let (u, v) = g.edge(e);
                member[u] && member[v]
            });
            let inner = self.inner.preprocess(&sub)?;
            for v in 0..g.n() {
                let p = &mut payloads[v];
                p.push(member[v] as u64, 1);
                if member[v] {
                    for &w in g.neighbors(v) {
                        p.push(member[w] as u64, 1);
                    }
                    p.push(inner[v].len_bits() as u64, 32);
                    p.extend(&inner[v]);
                }
            }
        }
        Ok(payloads)
    }

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<Self::Msg>,
    ) -> (Self::State, Option<bool>) {
        let mut reader = payload.reader();
        let parts = (0..self.parts())
            .map(|_| {
                if reader.take(1) == 0 {
                    return None;
                }
                let ports: Vec<usize> = (0..ctx.degree()).filter(|_| reader.take(1) == 1).collect();
                let len = reader.take(32) as usize;
                let mut payload = Payload::new();
                for _ in 0..len {
                    payload.push(reader.take(1), 1);
                }
                Some(PartView { neighbors: ports.iter().map(|&q| ctx.neighbor(q)).collect(), ports, payload })
            })
            .collect();
        let mut st = SplitNode { parts, active: active_of(input, ctx.degree()), dominated: false, running: None };
        let output = self.step(ctx, &mut st, 0, &[], out);
        (st, output)
    }

    fn on_round(
        &self,
        ctx: &NodeContext,
        st: &mut Self::State,
        round: usize,
        inbox: &[(usize, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Option<bool> {
        self.step(ctx, st, round, inbox, out)
    }
}

/// MIS of the active subgraph in at most `T k + k - 1` rounds.
pub fn mis_split<P: SubgraphMis>(
    g: &Graph,
    cover: &[Vec<usize>],
    inner: P,
    inst: &SubgraphInstance,
) -> Result<(Vec<bool>, RunReport<bool>), MmError> {
    let prog = MisSplit::new(g, cover, inner)?;
    if inst.active.len() != g.m() {
        return Err(MmError::MaskLength { got: inst.active.len(), expected: g.m() });
    }
    let pre = run_preprocess(g, &prog)?;
    let report = run_instance(g, &pre, &prog, &inst.to_instance(), prog.round_bound())?;
    Ok(finish(g, inst, report))
}

/// Line graph: vertex `e` for every edge id `e` of `g`, adjacent when the
/// edges share an endpoint.
pub fn line_graph(g: &Graph) -> Graph {
    let mut edges = Vec::new();
    for v in 0..g.n() {
        let inc = g.incident_edges(v);
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    Graph::from_edges_dedup(g.m(), &edges).expect("line graph of a simple graph is simple")
}
