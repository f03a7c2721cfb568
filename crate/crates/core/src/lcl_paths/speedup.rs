//! Constant-round wrapper around an algorithm tuned for paths of length `n0`.
//!
//! Each vertex gathers its radius-`T(n0)` neighborhood, rebuilds it as a
//! virtual path of `n0` vertices and replays the inner algorithm there for
//! `T(n0)` rounds. Whatever lies farther away cannot reach it within that
//! many rounds, so the replayed output equals the one the inner algorithm
//! would produce on the real path. Paths shorter than `n0` run the inner
//! algorithm directly.

use super::{path_order, LclError};
use crate::graph::Graph;
use crate::sim::{
    bits_for, run_rounds, BallGather, LocalInput, NodeContext, NodeProgram, Outbox, Payload, PreprocessedState,
    RecurrentInstance, SimError,
};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone)]
pub struct Speedup<P> {
    inner: P,
    n0: usize,
    t: usize,
}

/// What a vertex shares about itself while gathering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowRecord {
    pub payload: Payload,
    pub neighbors: Vec<usize>,
    pub active: Vec<bool>,
}

#[derive(Debug, Clone)]
pub enum SpeedupMsg<M> {
    Gather(Vec<(usize, WindowRecord)>),
    Inner(M),
}

pub enum SpeedupState<S> {
    Direct(S),
    Window { gather: BallGather<WindowRecord>, own: Payload },
}

impl<P: NodeProgram> Speedup<P> {
    /// Fails unless `4 t_of(n0) < n0`.
    pub fn new(inner: P, t_of: impl Fn(usize) -> usize, n0: usize) -> Result<Self, LclError> {
        let t = t_of(n0);
        if 4 * t >= n0 {
            return Err(LclError::InvalidN0 { n0, t });
        }
        Ok(Speedup { inner, n0, t })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    /// Rounds used on paths with at least `n0` vertices.
    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    fn wrap(out: Outbox<P::Msg>, into: &mut Outbox<SpeedupMsg<P::Msg>>) {
        let (msgs, work) = out.into_parts();
        into.charge(work);
        for (port, m) in msgs {
            into.send(port, SpeedupMsg::Inner(m));
        }
    }

    fn send_gather(gather: &mut BallGather<WindowRecord>, degree: usize, into: &mut Outbox<SpeedupMsg<P::Msg>>) {
        let mut out = Outbox::new(degree);
        gather.send(&mut out);
        let (msgs, _) = out.into_parts();
        for (port, batch) in msgs {
            into.send(port, SpeedupMsg::Gather(batch));
        }
    }

    /// Replays the inner algorithm on the gathered neighborhood. Virtual ids
    /// keep the order of the real ids, so ports keep their meaning.
    fn replay(&self, me: usize, known: &BTreeMap<usize, WindowRecord>, own: &Payload) -> Option<P::Output> {
        let mut ids: BTreeSet<usize> = known.keys().copied().collect();
        let mut active: HashMap<(usize, usize), bool> = HashMap::new();
        for (&id, rec) in known {
            for (&w, &a) in rec.neighbors.iter().zip(&rec.active) {
                ids.insert(w);
                active.insert((id.min(w), id.max(w)), a);
            }
        }
        let real: Vec<usize> = ids.into_iter().collect();
        let rank: HashMap<usize, usize> = real.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = real.len().max(self.n0);
        let edges: Vec<(usize, usize)> = active.keys().map(|&(a, b)| (rank[&a], rank[&b])).collect();
        let g = Graph::from_edges_dedup(n, &edges).ok()?;
        let mask = g.edges().iter().map(|&(a, b)| active[&(real[a], real[b])]).collect();
        // vertices outside the gathered ball only fill the window; their
        // payload never influences `me` within the replayed rounds
        let payloads =
            (0..n).map(|v| real.get(v).and_then(|id| known.get(id)).map_or_else(|| own.clone(), |r| r.payload.clone()));
        let pre = PreprocessedState::new(payloads.collect());
        let report = run_rounds(&g, &pre, &self.inner, &RecurrentInstance::EdgeSubset(mask), self.t).ok()?;
        report.outputs[rank[&me]].clone()
    }
}

impl<P: NodeProgram> NodeProgram for Speedup<P> {
    type State = SpeedupState<P::State>;
    type Msg = SpeedupMsg<P::Msg>;
    /// `None` if the inner algorithm did not halt within `T(n0)` replayed rounds.
    type Output = Option<P::Output>;
    const USES_N: bool = P::USES_N;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        let order = path_order(g).map_err(|e| SimError::Preprocess { vertex: None, msg: e.to_string() })?;
        let inner = self.inner.preprocess(g)?;
        let direct = g.n() < self.n0;
        let width = bits_for(self.n0);
        let mut payloads = vec![Payload::new(); g.n()];
        for (i, &v) in order.iter().enumerate() {
            let mut p = Payload::new().with(direct as u64, 1).with((i % self.n0) as u64, width);
            p.extend(&inner[v]);
            payloads[v] = p;
        }
        Ok(payloads)
    }

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<Self::Msg>,
    ) -> (Self::State, Option<Self::Output>) {
        let mut reader = payload.reader();
        let direct = reader.take(1) == 1;
        let _position = reader.take(bits_for(self.n0));
        let own = reader.rest();
        if direct {
            let mut inner_out = Outbox::new(ctx.degree());
            let (state, output) = self.inner.init(ctx, &own, input, &mut inner_out);
            Self::wrap(inner_out, out);
            return (SpeedupState::Direct(state), output.map(Some));
        }
        let active = input.active_ports().map_or_else(|| vec![true; ctx.degree()], <[bool]>::to_vec);
        let record = WindowRecord { payload: own.clone(), neighbors: ctx.neighbors().to_vec(), active };
        let mut gather = BallGather::new(ctx.id, record);
        if self.t == 0 {
            let output = self.replay(ctx.id, gather.known(), &own);
            return (SpeedupState::Window { gather, own }, Some(output));
        }
        Self::send_gather(&mut gather, ctx.degree(), out);
        (SpeedupState::Window { gather, own }, None)
    }

    fn on_round(
        &self,
        ctx: &NodeContext,
        state: &mut Self::State,
        round: usize,
        inbox: &[(usize, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Option<Self::Output> {
        match state {
            SpeedupState::Direct(s) => {
                let msgs: Vec<(usize, P::Msg)> = inbox
                    .iter()
                    .filter_map(|(p, m)| match m {
                        SpeedupMsg::Inner(m) => Some((*p, m.clone())),
                        SpeedupMsg::Gather(_) => None,
                    })
                    .collect();
                let mut inner_out = Outbox::new(ctx.degree());
                let output = self.inner.on_round(ctx, s, round, &msgs, &mut inner_out);
                Self::wrap(inner_out, out);
                output.map(Some)
            }
            SpeedupState::Window { gather, own } => {
                let batches: Vec<(usize, Vec<(usize, WindowRecord)>)> = inbox
                    .iter()
                    .filter_map(|(p, m)| match m {
                        SpeedupMsg::Gather(b) => Some((*p, b.clone())),
                        SpeedupMsg::Inner(_) => None,
                    })
                    .collect();
                gather.receive(&batches);
                if round >= self.t {
                    return Some(self.replay(ctx.id, gather.known(), own));
                }
                Self::send_gather(gather, ctx.degree(), out);
                None
            }
        }
    }
}
