//! Completing a proper precoloring to a proper coloring of the whole graph.
//!
//! Three schemes use a default coloring `dc` with `χ` colors computed during
//! preprocessing: one round over the palette `(i, j)` with `i ≤ χ, j ≤ Δ`, a
//! `k`-round schedule over a palette of `⌈χ/k⌉·Δ` colors, and priority
//! recoloring in `χ` rounds. The fourth needs no preprocessing and draws
//! colors from a shared [`SetFamily`].

mod family;

pub use family::{
    build_set_family, build_set_family_with, universe_size, FamilyCheck, FamilyOptions, SetFamily, Violation,
};

use crate::graph::{greedy_chromatic_upper, Graph, GraphError};
use crate::oracles::chromatic_exact;
use crate::sim::{
    bits_for, run_instance, run_preprocess, LocalInput, NodeContext, NodeProgram, Outbox, Payload,
    RecurrentInstance, RunReport, SimError,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CcError {
    #[error("invalid default coloring: {0}")]
    InvalidDefaultColoring(String),
    #[error("k = {k} is outside 1..={chi}")]
    InvalidK { k: u32, chi: u32 },
    #[error("coloring does not extend the precoloring at vertex {0}")]
    Inconsistent(usize),
    #[error("vertex {0} found no free color")]
    CompletionFailed(usize),
    #[error("precolor {color} of vertex {vertex} is outside the family universe 1..={m}")]
    PrecolorOutOfPalette { vertex: usize, color: u32, m: usize },
    #[error("no set family verified after {attempts} attempts; last violation: {violation}")]
    NotFound { attempts: usize, violation: String },
    #[error("invalid set family: {0}")]
    InvalidFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Palette color `(i, j)`. With `Δ' = max(Δ, 1)` it is encoded as
/// `(i-1)(Δ'+1) + j`, which leaves room for the overflow color `(1, Δ'+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PaletteColor {
    pub i: u32,
    pub j: u32,
}

impl PaletteColor {
    pub fn new(i: u32, j: u32) -> Self {
        PaletteColor { i, j }
    }

    fn width(delta: usize) -> u32 {
        delta.max(1) as u32 + 1
    }

    pub fn encode(self, delta: usize) -> u32 {
        debug_assert!(self.i >= 1 && self.j >= 1 && self.j <= Self::width(delta));
        (self.i - 1) * Self::width(delta) + self.j
    }

    /// Inverse of [`encode`](Self::encode); total on positive integers.
    pub fn decode(c: u32, delta: usize) -> Self {
        let w = Self::width(delta);
        PaletteColor { i: (c - 1) / w + 1, j: (c - 1) % w + 1 }
    }
}

/// Where the number of default colors came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChiSource {
    /// Exact chromatic number.
    Exact,
    /// Greedy upper bound.
    Greedy,
    /// Coloring given by the caller.
    Supplied,
}

/// The coloring computed in preprocessing. Colors are `1..=chi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefaultColoring {
    pub colors: Vec<u32>,
    pub chi: u32,
    pub source: ChiSource,
}

impl DefaultColoring {
    /// Graphs up to this size get an exact coloring.
    pub const EXACT_LIMIT: usize = 20;

    pub fn compute(g: &Graph) -> Self {
        if let Ok((chi, colors)) = chromatic_exact(g, Self::EXACT_LIMIT) {
            return DefaultColoring { colors, chi: chi.max(1) as u32, source: ChiSource::Exact };
        }
        let (chi, colors) = greedy_chromatic_upper(g);
        DefaultColoring { colors, chi: chi.max(1) as u32, source: ChiSource::Greedy }
    }

    /// Checks a caller's coloring; `chi` is its largest color.
    pub fn supplied(g: &Graph, colors: Vec<u32>) -> Result<Self, CcError> {
        if colors.len() != g.n() {
            return Err(CcError::InvalidDefaultColoring(format!(
                "{} colors for {} vertices",
                colors.len(),
                g.n()
            )));
        }
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return Err(CcError::InvalidDefaultColoring(format!("vertex {v} has color 0")));
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| colors[u] == colors[v]) {
            return Err(CcError::InvalidDefaultColoring(format!("edge ({u}, {v}) is monochromatic")));
        }
        let chi = colors.iter().copied().max().unwrap_or(1);
        Ok(DefaultColoring { colors, chi, source: ChiSource::Supplied })
    }

    fn payloads(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        if self.colors.len() != g.n() {
            return Err(SimError::Preprocess {
                vertex: None,
                msg: format!("default coloring has {} entries for {} vertices", self.colors.len(), g.n()),
            });
        }
        let width = bits_for(self.chi as usize);
        Ok(self.colors.iter().map(|&c| Payload::new().with(c as u64 - 1, width)).collect())
    }

    fn read(&self, payload: &Payload) -> u32 {
        payload.read(0, bits_for(self.chi as usize)) as u32 + 1
    }
}

/// Palette sizes of a completed coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColorStats {
    pub chi_pc: usize,
    pub chi_un: usize,
    pub chi_new: usize,
    pub chi_all: usize,
}

/// Palette sizes of `colors`, which must agree with `pc`.
pub fn color_stats(pc: &BTreeMap<usize, u32>, colors: &[u32]) -> Result<ColorStats, CcError> {
    if let Some((&v, _)) = pc.iter().find(|(&v, &c)| colors.get(v) != Some(&c)) {
        return Err(CcError::Inconsistent(v));
    }
    let pre: BTreeSet<u32> = pc.values().copied().collect();
    let un: BTreeSet<u32> =
        colors.iter().enumerate().filter(|(v, _)| !pc.contains_key(v)).map(|(_, &c)| c).collect();
    let chi_new = un.difference(&pre).count();
    Ok(ColorStats { chi_pc: pre.len(), chi_un: un.len(), chi_new, chi_all: pre.len() + chi_new })
}

/// A completed instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Completion {
    pub colors: Vec<u32>,
    pub stats: ColorStats,
    pub report: RunReport<u32>,
}

/// Turns node outputs into a completion; output 0 marks a node that found
/// no free color.
pub fn finish(pc: &BTreeMap<usize, u32>, report: RunReport<u32>) -> Result<Completion, CcError> {
    let colors = report.unwrap_outputs();
    if let Some(v) = colors.iter().position(|&c| c == 0) {
        return Err(CcError::CompletionFailed(v));
    }
    let stats = color_stats(pc, &colors)?;
    Ok(Completion { colors, stats, report })
}

/// Node state. Precolored nodes announce their color in round 0 and halt
/// in round 1 so that every scheme reports its full schedule. Uncolored
/// nodes keep their default color, the round they decide in, and the colors
/// their neighbors have fixed so far.
#[derive(Debug)]
pub struct Pending {
    fixed: u32,
    dc: u32,
    due: usize,
    heard: usize,
    blocked: BTreeSet<u32>,
}

impl Pending {
    fn absorb(&mut self, inbox: &[(usize, u32)]) {
        for &(_, c) in inbox {
            self.heard += 1;
            self.blocked.insert(c);
        }
    }
}

/// Uncolored nodes with `dc(v) ≡ r (mod k)` decide in round `r`.
///
/// A node whose neighbors are all colored by then takes the smallest free
/// color among `(1,1..Δ)` followed by `(1,Δ+1)` when `k = χ` or `(2,1)`
/// otherwise. Every other node takes the smallest free `(⌈dc/k⌉, j)`,
/// `j ≤ Δ`, which exists because at least one neighbor is still uncolored.
/// `k = 1` is the single-round scheme.
#[derive(Debug, Clone)]
pub struct KRoundCompletion {
    dc: DefaultColoring,
    delta: usize,
    k: u32,
}

impl KRoundCompletion {
    pub fn new(g: &Graph, dc: DefaultColoring, k: u32) -> Result<Self, CcError> {
        if k < 1 || k > dc.chi {
            return Err(CcError::InvalidK { k, chi: dc.chi });
        }
        Ok(KRoundCompletion { dc, delta: g.max_degree(), k })
    }

    pub fn single_round(g: &Graph, dc: DefaultColoring) -> Self {
        KRoundCompletion { dc, delta: g.max_degree(), k: 1 }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Round in which a node with default color `dc` decides.
    pub fn round_of(&self, dc: u32) -> usize {
        ((dc - 1) % self.k) as usize + 1
    }

    /// Largest number of new colors the scheme may introduce.
    pub fn new_color_bound(&self) -> usize {
        let d = self.delta.max(1);
        if self.k == 1 {
            self.dc.chi as usize * d
        } else {
            (self.dc.chi.div_ceil(self.k) as usize * d).max(d + 1)
        }
    }

    pub fn round_cap(&self) -> usize {
        self.k as usize + 1
    }

    fn pick(&self, st: &Pending, degree: usize) -> u32 {
        let d = self.delta.max(1) as u32;
        let enc = |i: u32, j: u32| PaletteColor::new(i, j).encode(self.delta);
        let free = |c: &u32| !st.blocked.contains(c);
        let choice = if st.heard == degree {
            let extra = if self.k == self.dc.chi { enc(1, d + 1) } else { enc(2, 1) };
            (1..=d).map(|j| enc(1, j)).chain(std::iter::once(extra)).find(free)
        } else {
            let i = st.dc.div_ceil(self.k);
            (1..=d).map(|j| enc(i, j)).find(free)
        };
        choice.unwrap_or(0)
    }
}

impl NodeProgram for KRoundCompletion {
    type State = Pending;
    type Msg = u32;
    type Output = u32;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        self.dc.payloads(g)
    }

    fn init(&self, _: &NodeContext, payload: &Payload, input: &LocalInput, out: &mut Outbox<u32>) -> (Pending, Option<u32>) {
        let dc = self.dc.read(payload);
        let st = Pending { fixed: input.color(), dc, due: self.round_of(dc), heard: 0, blocked: BTreeSet::new() };
        if st.fixed > 0 {
            out.broadcast(st.fixed);
        }
        (st, None)
    }

    fn on_round(&self, ctx: &NodeContext, st: &mut Pending, round: usize, inbox: &[(usize, u32)], out: &mut Outbox<u32>) -> Option<u32> {
        if st.fixed > 0 {
            return Some(st.fixed);
        }
        st.absorb(inbox);
        if round < st.due {
            return None;
        }
        let c = self.pick(st, ctx.degree());
        out.charge(st.blocked.len() as u64);
        if round < self.k as usize {
            out.broadcast(c);
        }
        Some(c)
    }
}

/// Uncolored nodes of default class `r` take `min(ℕ ∖ Γ(v))` in round `r`,
/// where `Γ(v)` holds the colors already fixed around them.
#[derive(Debug, Clone)]
pub struct PriorityRecoloring {
    dc: DefaultColoring,
}

impl PriorityRecoloring {
    pub fn new(dc: DefaultColoring) -> Self {
        PriorityRecoloring { dc }
    }

    pub fn round_cap(&self) -> usize {
        self.dc.chi as usize + 1
    }
}

impl NodeProgram for PriorityRecoloring {
    type State = Pending;
    type Msg = u32;
    type Output = u32;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        self.dc.payloads(g)
    }

    fn init(&self, _: &NodeContext, payload: &Payload, input: &LocalInput, out: &mut Outbox<u32>) -> (Pending, Option<u32>) {
        let dc = self.dc.read(payload);
        let st = Pending { fixed: input.color(), dc, due: dc as usize, heard: 0, blocked: BTreeSet::new() };
        if st.fixed > 0 {
            out.broadcast(st.fixed);
        }
        (st, None)
    }

    fn on_round(&self, _: &NodeContext, st: &mut Pending, round: usize, inbox: &[(usize, u32)], out: &mut Outbox<u32>) -> Option<u32> {
        if st.fixed > 0 {
            return Some(st.fixed);
        }
        st.absorb(inbox);
        if round < st.due {
            return None;
        }
        let c = (1..).find(|c| !st.blocked.contains(c)).expect("finitely many blocked colors");
        out.charge(st.blocked.len() as u64);
        if round < self.dc.chi as usize {
            out.broadcast(c);
        }
        Some(c)
    }
}

/// One round without preprocessing. Node `v` with id `v+1` takes the
/// smallest element of `F_id(v)` outside its neighbors' sets and outside the
/// precolors it hears.
#[derive(Debug, Clone, Copy)]
pub struct FamilyCompletion<'a> {
    family: &'a SetFamily,
}

impl<'a> FamilyCompletion<'a> {
    pub fn new(family: &'a SetFamily) -> Self {
        FamilyCompletion { family }
    }
}

impl NodeProgram for FamilyCompletion<'_> {
    /// Own precolor, 0 if none.
    type State = u32;
    /// Sender id and its precolor (0 if none).
    type Msg = (usize, u32);
    type Output = u32;

    const USES_N: bool = true;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        Ok(vec![Payload::new(); g.n()])
    }

    fn init(&self, ctx: &NodeContext, _: &Payload, input: &LocalInput, out: &mut Outbox<(usize, u32)>) -> (u32, Option<u32>) {
        let c = input.color();
        out.broadcast((ctx.id + 1, c));
        (c, None)
    }

    fn on_round(&self, ctx: &NodeContext, fixed: &mut u32, _: usize, inbox: &[(usize, (usize, u32))], out: &mut Outbox<(usize, u32)>) -> Option<u32> {
        if *fixed > 0 {
            return Some(*fixed);
        }
        let fam = self.family;
        out.charge((fam.m * (inbox.len() + 1)) as u64);
        let c = (1..=fam.m)
            .find(|&x| {
                fam.contains(ctx.id + 1, x)
                    && inbox.iter().all(|&(_, (id, pre))| pre != x as u32 && !fam.contains(id, x))
            })
            .unwrap_or(0);
        Some(c as u32)
    }
}

fn precoloring(pc: &BTreeMap<usize, u32>) -> RecurrentInstance {
    RecurrentInstance::Precoloring(pc.clone())
}

/// Completes `pc` in exactly one round with at most `χ·Δ` new colors.
pub fn cc_single_round(g: &Graph, dc: &DefaultColoring, pc: &BTreeMap<usize, u32>) -> Result<Completion, CcError> {
    let p = KRoundCompletion::single_round(g, dc.clone());
    let pre = run_preprocess(g, &p)?;
    finish(pc, run_instance(g, &pre, &p, &precoloring(pc), p.round_cap())?)
}

/// Completes `pc` in at most `k` rounds with at most
/// `max(⌈χ/k⌉·Δ, Δ+1)` new colors.
pub fn cc_k_rounds(g: &Graph, dc: &DefaultColoring, pc: &BTreeMap<usize, u32>, k: u32) -> Result<Completion, CcError> {
    let p = KRoundCompletion::new(g, dc.clone(), k)?;
    let pre = run_preprocess(g, &p)?;
    finish(pc, run_instance(g, &pre, &p, &precoloring(pc), p.round_cap())?)
}

/// Completes `pc` in `χ` rounds with `χ_all ≤ χ_pc + χ`.
pub fn cc_priority_recoloring(g: &Graph, dc: &DefaultColoring, pc: &BTreeMap<usize, u32>) -> Result<Completion, CcError> {
    let p = PriorityRecoloring::new(dc.clone());
    let pre = run_preprocess(g, &p)?;
    finish(pc, run_instance(g, &pre, &p, &precoloring(pc), p.round_cap())?)
}

/// Completes `pc` in one round from a family built for `(n, Δ)`. Precolors
/// must lie in the family universe for the guarantee to hold.
pub fn cc_no_preprocess(g: &Graph, pc: &BTreeMap<usize, u32>, family: &SetFamily) -> Result<Completion, CcError> {
    if family.n < g.n() || family.delta < g.max_degree() {
        return Err(CcError::InvalidFamily(format!(
            "family for n={}, delta={} cannot serve n={}, delta={}",
            family.n,
            family.delta,
            g.n(),
            g.max_degree()
        )));
    }
    if let Some((&vertex, &color)) = pc.iter().find(|(_, &c)| c as usize > family.m) {
        return Err(CcError::PrecolorOutOfPalette { vertex, color, m: family.m });
    }
    let p = FamilyCompletion::new(family);
    let pre = run_preprocess(g, &p)?;
    finish(pc, run_instance(g, &pre, &p, &precoloring(pc), 2)?)
}

/// `K_χ` with `Δ-χ+1` pendant vertices on every clique vertex; clique
/// vertices are `0..χ`.
pub fn clique_with_pendants(chi: usize, delta: usize) -> Result<Graph, CcError> {
    if chi == 0 || delta + 1 < chi {
        return Err(CcError::Graph(GraphError::InvalidSize(format!("need 1 <= chi <= delta+1, got chi={chi}, delta={delta}"))));
    }
    let mut edges = Vec::new();
    for u in 0..chi {
        for v in u + 1..chi {
            edges.push((u, v));
        }
    }
    let mut next = chi;
    for u in 0..chi {
        for _ in 0..delta + 1 - chi {
            edges.push((u, next));
            next += 1;
        }
    }
    Ok(Graph::new(next, &edges)?)
}

/// `K_χ` on `0..χ` whose vertex 0 is joined to the end of a path of `t`
/// further vertices; the diameter grows with `t`.
pub fn clique_with_tail(chi: usize, t: usize) -> Result<Graph, CcError> {
    if chi == 0 {
        return Err(CcError::Graph(GraphError::InvalidSize("empty clique".into())));
    }
    let mut edges = Vec::new();
    for u in 0..chi {
        for v in u + 1..chi {
            edges.push((u, v));
        }
    }
    for i in 0..t {
        edges.push((if i == 0 { 0 } else { chi + i - 1 }, chi + i));
    }
    Ok(Graph::new(chi + t, &edges)?)
}
