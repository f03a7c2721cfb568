//! Synchronous message passing with a preprocessing stage.
//!
//! A [`NodeProgram`] first turns the whole support graph into one [`Payload`]
//! per vertex. Every online instance then runs in lock-step rounds: messages
//! sent in round `t` (round 0 is `init`) are delivered at round `t + 1`. A node
//! halts by returning its output; halted nodes are never called again and
//! messages addressed to them are dropped. `rounds` is the latest halt time.

mod ball;
mod instance;
mod payload;
mod report;

pub use ball::BallGather;
pub use instance::{parse_instance, parse_instances, write_instances, InstanceError, LocalInput, RecurrentInstance};
pub use payload::{bits_for, Payload, PayloadReader, PreprocessedState};
pub use report::{Ratio, RunReport, Verdict};

use crate::graph::Graph;
use serde::Serialize;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("preprocessing failed at vertex {vertex:?}: {msg}")]
    Preprocess { vertex: Option<usize>, msg: String },
    #[error("preprocessed state has {got} payloads for {expected} vertices")]
    StateMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("round cap {cap} reached with {running} of {n} nodes still running ({messages} messages sent)")]
    CapExceeded { cap: usize, running: usize, n: usize, messages: u64 },
}

/// What a node knows about itself when it wakes up.
#[derive(Debug, Clone, Copy)]
pub struct NodeContext<'a> {
    pub id: usize,
    neighbors: &'a [usize],
    n: Option<usize>,
}

impl<'a> NodeContext<'a> {
    pub fn new(id: usize, neighbors: &'a [usize], n: Option<usize>) -> Self {
        NodeContext { id, neighbors, n }
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbor ids in port order.
    pub fn neighbors(&self) -> &'a [usize] {
        self.neighbors
    }

    pub fn neighbor(&self, port: usize) -> usize {
        self.neighbors[port]
    }

    pub fn port_of(&self, id: usize) -> Option<usize> {
        self.neighbors.iter().position(|&w| w == id)
    }

    /// Number of vertices; only available to programs with `USES_N`.
    pub fn n(&self) -> usize {
        self.n.expect("program did not declare USES_N")
    }
}

/// Messages queued by a node in one round.
#[derive(Debug)]
pub struct Outbox<M> {
    msgs: Vec<(usize, M)>,
    degree: usize,
    work: u64,
}

impl<M: Clone> Outbox<M> {
    pub fn new(degree: usize) -> Self {
        Outbox { msgs: Vec::new(), degree, work: 0 }
    }

    pub fn send(&mut self, port: usize, msg: M) {
        assert!(port < self.degree, "port {port} out of range");
        self.msgs.push((port, msg));
    }

    pub fn broadcast(&mut self, msg: M) {
        for port in 0..self.degree {
            self.msgs.push((port, msg.clone()));
        }
    }

    /// Records local computation for the step counter.
    pub fn charge(&mut self, units: u64) {
        self.work += units;
    }

    pub fn into_parts(self) -> (Vec<(usize, M)>, u64) {
        (self.msgs, self.work)
    }
}

/// A two-stage distributed algorithm.
pub trait NodeProgram: Sync {
    type State: Send;
    type Msg: Clone + Send + Sync;
    type Output: Clone + Send + Sync + Debug + PartialEq + Serialize;

    /// Whether online nodes are told `n`.
    const USES_N: bool = false;

    /// Unmetered preprocessing; may read the whole graph.
    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError>;

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<Self::Msg>,
    ) -> (Self::State, Option<Self::Output>);

    /// One synchronous round; inbox entries are `(port, message)` in port order.
    fn on_round(
        &self,
        ctx: &NodeContext,
        state: &mut Self::State,
        round: usize,
        inbox: &[(usize, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Option<Self::Output>;
}

pub fn run_preprocess<P: NodeProgram>(g: &Graph, p: &P) -> Result<PreprocessedState, SimError> {
    let payloads = p.preprocess(g)?;
    if payloads.len() != g.n() {
        return Err(SimError::StateMismatch { got: payloads.len(), expected: g.n() });
    }
    Ok(PreprocessedState::new(payloads))
}

/// Runs one instance until every node halts or `round_cap` rounds pass.
pub fn run_instance<P: NodeProgram>(
    g: &Graph,
    pre: &PreprocessedState,
    p: &P,
    inst: &RecurrentInstance,
    round_cap: usize,
) -> Result<RunReport<P::Output>, SimError> {
    simulate(g, pre, p, inst, round_cap, true)
}

/// Runs exactly `rounds` rounds (or until every node halts) and reports
/// whatever outputs exist by then; nodes still running have `None`.
pub fn run_rounds<P: NodeProgram>(
    g: &Graph,
    pre: &PreprocessedState,
    p: &P,
    inst: &RecurrentInstance,
    rounds: usize,
) -> Result<RunReport<P::Output>, SimError> {
    simulate(g, pre, p, inst, rounds, false)
}

fn simulate<P: NodeProgram>(
    g: &Graph,
    pre: &PreprocessedState,
    p: &P,
    inst: &RecurrentInstance,
    round_cap: usize,
    strict: bool,
) -> Result<RunReport<P::Output>, SimError> {
    let n = g.n();
    if pre.len() != n {
        return Err(SimError::StateMismatch { got: pre.len(), expected: n });
    }
    inst.validate(g)?;
    let known_n = P::USES_N.then_some(n);
    // back-port: position of v in the list of its neighbor at each port
    let back: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&w| g.port_of(w, v).expect("symmetric adjacency")).collect())
        .collect();

    let mut states: Vec<Option<P::State>> = Vec::with_capacity(n);
    let mut outputs: Vec<Option<P::Output>> = vec![None; n];
    let mut inbox: Vec<Vec<(usize, P::Msg)>> = (0..n).map(|_| Vec::new()).collect();
    let mut next: Vec<Vec<(usize, P::Msg)>> = (0..n).map(|_| Vec::new()).collect();
    let mut messages = 0u64;
    let mut steps = 0u64;
    let mut rounds = 0;

    let mut deliver = |v: usize,
                       out: Outbox<P::Msg>,
                       next: &mut Vec<Vec<(usize, P::Msg)>>,
                       states: &[Option<P::State>],
                       steps: &mut u64| {
        let (msgs, work) = out.into_parts();
        *steps += 1 + work;
        for (port, msg) in msgs {
            messages += 1;
            let w = g.neighbors(v)[port];
            // during init every later vertex is still unborn, so only drop
            // messages to vertices that already halted
            if w < states.len() && states[w].is_none() {
                continue;
            }
            next[w].push((back[v][port], msg));
        }
    };

    let mut alive = Vec::new();
    for v in 0..n {
        let ctx = NodeContext::new(v, g.neighbors(v), known_n);
        let input = inst.local_input(g, v);
        let mut out = Outbox::new(g.degree(v));
        let (state, output) = p.init(&ctx, pre.payload(v), &input, &mut out);
        deliver(v, out, &mut next, &states, &mut steps);
        if output.is_some() {
            outputs[v] = output;
            states.push(None);
        } else {
            states.push(Some(state));
            alive.push(v);
        }
    }
    for v in 0..n {
        if states[v].is_none() {
            next[v].clear();
        }
    }

    let mut round = 0;
    while !alive.is_empty() {
        if round == round_cap {
            if strict {
                return Err(SimError::CapExceeded { cap: round_cap, running: alive.len(), n, messages });
            }
            rounds = round;
            break;
        }
        round += 1;
        std::mem::swap(&mut inbox, &mut next);
        let mut still = Vec::with_capacity(alive.len());
        for &v in &alive {
            let mut msgs = std::mem::take(&mut inbox[v]);
            msgs.sort_by_key(|&(port, _)| port);
            let ctx = NodeContext::new(v, g.neighbors(v), known_n);
            let mut out = Outbox::new(g.degree(v));
            let state = states[v].as_mut().expect("alive vertices keep their state");
            let output = p.on_round(&ctx, state, round, &msgs, &mut out);
            msgs.clear();
            inbox[v] = msgs;
            deliver(v, out, &mut next, &states, &mut steps);
            if output.is_some() {
                outputs[v] = output;
                states[v] = None;
                next[v].clear();
                rounds = round;
            } else {
                still.push(v);
            }
        }
        alive = still;
    }
    Ok(RunReport { index: 0, rounds, messages, local_steps: steps, outputs, valid: None, quality: None, error: None })
}

/// How a stream of instances is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Instances run on the rayon pool; falls back to sequential without the
    /// `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Runs every instance against the same preprocessed state; reports are in
/// input order and per-instance errors are stored in the report.
pub fn run_stream<P, V>(
    g: &Graph,
    pre: &PreprocessedState,
    p: &P,
    instances: &[RecurrentInstance],
    round_cap: usize,
    validator: V,
) -> Vec<RunReport<P::Output>>
where
    P: NodeProgram,
    V: Fn(&RecurrentInstance, &[Option<P::Output>]) -> Verdict + Sync,
{
    run_stream_with(Execution::default(), g, pre, p, instances, round_cap, validator)
}

pub fn run_stream_with<P, V>(
    exec: Execution,
    g: &Graph,
    pre: &PreprocessedState,
    p: &P,
    instances: &[RecurrentInstance],
    round_cap: usize,
    validator: V,
) -> Vec<RunReport<P::Output>>
where
    P: NodeProgram,
    V: Fn(&RecurrentInstance, &[Option<P::Output>]) -> Verdict + Sync,
{
    let one = |(index, inst): (usize, &RecurrentInstance)| {
        let mut report = match run_instance(g, pre, p, inst, round_cap) {
            Ok(r) => r,
            Err(e) => RunReport {
                index,
                rounds: 0,
                messages: 0,
                local_steps: 0,
                outputs: vec![None; g.n()],
                valid: Some(false),
                quality: None,
                error: Some(e.to_string()),
            },
        };
        report.index = index;
        if report.error.is_none() {
            let verdict = validator(inst, &report.outputs);
            report.valid = Some(verdict.valid);
            report.quality = verdict.quality;
        }
        report
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            instances.par_iter().enumerate().map(one).collect()
        }
        _ => instances.iter().enumerate().map(one).collect(),
    }
}
