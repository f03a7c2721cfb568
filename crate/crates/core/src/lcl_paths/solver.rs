//! Constant-round online solver for problems meeting the residue criterion.
//!
//! Preprocessing cuts the path into blocks of `k` vertices, `k` the length of
//! the chosen closed walk, and stores two bits per vertex: the parity of its
//! block and whether port 0 leads right. Online, each subpath is labelled
//! with the closed walk block by block, and its ends are patched with the
//! shortest witness walks whose lengths fit the offsets of the ends. Short
//! subpaths are solved outright from their length. Every vertex on a
//! subpath of two or more vertices halts at the same fixed round.

use super::digraph::{Classification, Complexity, LabelDigraph};
use super::{path_order, Label, LclError, LclSpec};
use crate::graph::Graph;
use crate::sim::{LocalInput, NodeContext, NodeProgram, Outbox, Payload, SimError};

/// What a vertex tells a neighbor on its subpath. Sent rightward, `dist`
/// is the distance to the left end and `block` the offset in the block;
/// sent leftward, the distance to the right end and the distance to the
/// end of the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wave {
    pub psi: bool,
    pub dist: Option<u32>,
    pub block: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct PathSolver {
    spec_name: String,
    k: usize,
    /// Label at block offset `o`.
    cycle: Vec<Label>,
    /// `left[r][d]`: label at distance `d` from the left end when the prefix walk has length `≡ r`.
    left: Vec<Vec<Label>>,
    /// `right[r][d]`: label at distance `d` from the right end.
    right: Vec<Vec<Label>>,
    threshold: usize,
    rounds: usize,
    /// Smallest valid labelling per length below the threshold.
    small: Vec<Option<Vec<Label>>>,
}

#[derive(Debug, Clone)]
pub struct PathNode {
    psi: bool,
    left: Option<usize>,
    right: Option<usize>,
    dl: Option<u32>,
    dr: Option<u32>,
    ol: Option<u32>,
    er: Option<u32>,
    sent_right: (Option<u32>, Option<u32>),
    sent_left: (Option<u32>, Option<u32>),
}

impl PathSolver {
    pub fn new(spec: &LclSpec) -> Result<Self, LclError> {
        let cls = super::classify(spec)?;
        PathSolver::from_classification(spec, &cls)
    }

    pub fn from_classification(spec: &LclSpec, cls: &Classification) -> Result<Self, LclError> {
        let witness = match (&cls.complexity, &cls.witness) {
            (Complexity::Theta1, Some(w)) => w,
            _ => return Err(LclError::NotConstant(spec.name.clone())),
        };
        let dg = LabelDigraph::new(spec);
        let k = witness.k;
        let alpha = dg.alpha();
        let cycle: Vec<Label> = witness.cycle[..k].iter().map(|&u| dg.pair(u).0).collect();
        let left: Vec<Vec<Label>> = witness
            .tables
            .left
            .iter()
            .map(|w| {
                let w = w.as_ref().expect("criterion covers every residue");
                w[..w.len() - 1].iter().map(|&u| dg.pair(u).0).collect()
            })
            .collect();
        let right: Vec<Vec<Label>> = witness
            .tables
            .right
            .iter()
            .map(|w| {
                let w = w.as_ref().expect("criterion covers every residue");
                let len = w.len() - 1;
                (0..len).map(|d| dg.pair(w[len - d]).1).collect()
            })
            .collect();
        let lmax = left.iter().map(Vec::len).max().unwrap_or(0);
        let rmax = right.iter().map(Vec::len).max().unwrap_or(0);
        let threshold = (4 * alpha * alpha + 2 * alpha).max(lmax + rmax + 2);
        let rounds = threshold.max(k + 1);
        let small = (0..threshold).map(|n| dg.smallest_labelling(n)).collect();
        Ok(PathSolver { spec_name: spec.name.clone(), k, cycle, left, right, threshold, rounds, small })
    }

    pub fn spec_name(&self) -> &str {
        &self.spec_name
    }

    pub fn block_len(&self) -> usize {
        self.k
    }

    /// Subpaths with fewer vertices are labelled from their length alone.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Halting round of every vertex on a subpath with two or more vertices.
    pub fn round_bound(&self) -> usize {
        self.rounds
    }

    fn decide(&self, st: &PathNode) -> Option<Label> {
        if let (Some(dl), Some(dr)) = (st.dl, st.dr) {
            let n = (dl + dr + 1) as usize;
            if n < self.threshold {
                return self.small[n].as_ref().map(|l| l[dl as usize]);
            }
        }
        let k = self.k as u32;
        let o = st.ol.or(st.er.map(|e| k - 1 - e)).expect("long subpaths see a block boundary within k hops");
        if let Some(dl) = st.dl {
            let first = (o + k - dl % k) % k;
            let w = &self.left[((k - first) % k) as usize];
            if (dl as usize) < w.len() {
                return Some(w[dl as usize]);
            }
        }
        if let Some(dr) = st.dr {
            let last = (o + dr) % k;
            let w = &self.right[((last + k - 1) % k) as usize];
            if (dr as usize) < w.len() {
                return Some(w[dr as usize]);
            }
        }
        Some(self.cycle[o as usize])
    }

    fn send(&self, st: &mut PathNode, out: &mut Outbox<Wave>) {
        if let Some(p) = st.right {
            let now = (st.dl, st.ol);
            if now != st.sent_right {
                out.send(p, Wave { psi: st.psi, dist: st.dl, block: st.ol });
                st.sent_right = now;
            }
        }
        if let Some(p) = st.left {
            let now = (st.dr, st.er);
            if now != st.sent_left {
                out.send(p, Wave { psi: st.psi, dist: st.dr, block: st.er });
                st.sent_left = now;
            }
        }
    }
}

impl NodeProgram for PathSolver {
    type State = PathNode;
    type Msg = Wave;
    /// `None` reports that no valid labelling of the subpath exists.
    type Output = Option<Label>;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        let order = path_order(g).map_err(|e| SimError::Preprocess { vertex: None, msg: e.to_string() })?;
        let mut payloads = vec![Payload::new(); g.n()];
        for (i, &v) in order.iter().enumerate() {
            let psi = (i / self.k) % 2;
            let right_at_0 = order.get(i + 1).is_some_and(|&w| g.neighbors(v)[0] == w);
            payloads[v] = Payload::new().with(psi as u64, 1).with(right_at_0 as u64, 1);
        }
        Ok(payloads)
    }

    fn init(
        &self,
        ctx: &NodeContext,
        payload: &Payload,
        input: &LocalInput,
        out: &mut Outbox<Wave>,
    ) -> (PathNode, Option<Option<Label>>) {
        let psi = payload.read(0, 1) == 1;
        let right_at_0 = payload.read(1, 1) == 1;
        let (mut left, mut right) = match (ctx.degree(), right_at_0) {
            (0, _) => (None, None),
            (1, true) => (None, Some(0)),
            (1, false) => (Some(0), None),
            (_, true) => (Some(1), Some(0)),
            (_, false) => (Some(0), Some(1)),
        };
        if let Some(active) = input.active_ports() {
            left = left.filter(|&p| active[p]);
            right = right.filter(|&p| active[p]);
        }
        let mut st = PathNode {
            psi,
            left,
            right,
            dl: left.is_none().then_some(0),
            dr: right.is_none().then_some(0),
            ol: None,
            er: None,
            sent_right: (Some(u32::MAX), None),
            sent_left: (Some(u32::MAX), None),
        };
        if left.is_none() && right.is_none() {
            return (st, Some(self.small.get(1).cloned().flatten().map(|l| l[0])));
        }
        self.send(&mut st, out);
        (st, None)
    }

    fn on_round(
        &self,
        _ctx: &NodeContext,
        st: &mut PathNode,
        round: usize,
        inbox: &[(usize, Wave)],
        out: &mut Outbox<Wave>,
    ) -> Option<Option<Label>> {
        for &(port, w) in inbox {
            if Some(port) == st.left {
                st.dl = st.dl.or(w.dist.map(|d| d + 1));
                st.ol = st.ol.or(if w.psi != st.psi { Some(0) } else { w.block.map(|b| b + 1) });
            } else if Some(port) == st.right {
                st.dr = st.dr.or(w.dist.map(|d| d + 1));
                st.er = st.er.or(if w.psi != st.psi { Some(0) } else { w.block.map(|b| b + 1) });
            }
        }
        self.send(st, out);
        (round >= self.rounds).then(|| self.decide(st))
    }
}
