//! Client dominating set on trees.
//!
//! [`p_up`] is the exact leaves-up procedure. [`appr`] splits the tree into
//! subtrees of depth `k` and combines local runs of it in `2k + 1` rounds.
//! Its target factor over the optimum is `1 + 4/(k-1)`. Random trees stay
//! well inside it, but some trees do not: on a path with clients at
//! positions `0, 1, k-1 (mod k)` the ratio tends to 2 for every `k` (see
//! `block_path_exceeds_claimed_ratio`).

use crate::graph::{Graph, RootedTree};
use crate::oracles::validate::is_client_dominating;
use crate::sim::{
    bits_for, run_instance, run_preprocess, LocalInput, NodeContext, NodeProgram, Outbox, Payload,
    RecurrentInstance, RunReport, SimError,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdsError {
    #[error("subtree mode needs a parent of vertex {0}")]
    MissingParent(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("k = {0} is not of the form 4l+1 with l >= 1")]
    InvalidK(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// The client set of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdsInstance {
    pub clients: Vec<bool>,
}

impl CdsInstance {
    pub fn new(clients: Vec<bool>) -> Self {
        CdsInstance { clients }
    }

    pub fn from_vertices(n: usize, clients: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &c in clients {
            mask[c] = true;
        }
        CdsInstance { clients: mask }
    }

    pub fn from_instance(inst: &RecurrentInstance) -> Option<Self> {
        match inst {
            RecurrentInstance::ClientSet(mask) => Some(CdsInstance::new(mask.clone())),
            _ => None,
        }
    }

    pub fn to_instance(&self) -> RecurrentInstance {
        RecurrentInstance::ClientSet(self.clients.clone())
    }

    pub fn is_client(&self, v: usize) -> bool {
        self.clients[v]
    }

    pub fn count(&self) -> usize {
        self.clients.iter().filter(|&&c| c).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSet {
    pub members: Vec<bool>,
}

impl DominatingSet {
    pub fn empty(n: usize) -> Self {
        DominatingSet { members: vec![false; n] }
    }

    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = usize>) -> Self {
        let mut d = DominatingSet::empty(n);
        for v in vs {
            d.members[v] = true;
        }
        d
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&v| self.members[v]).collect()
    }

    pub fn dominates(&self, g: &Graph, inst: &CdsInstance) -> bool {
        is_client_dominating(g, &inst.clients, &self.members)
    }
}

/// Leaves-up sweep over the descendants of `root` accepted by `in_scope`.
///
/// A vertex joins when one of its in-scope children is an undominated client.
/// The root, if it ends as an undominated client, joins itself, or in
/// subtree mode asks for its parent instead. Returns the selected vertices.
pub fn p_up_scoped(
    t: &RootedTree,
    clients: &[bool],
    root: usize,
    in_scope: impl Fn(usize) -> bool,
    subtree_mode: bool,
) -> Result<Vec<usize>, CdsError> {
    if subtree_mode && t.parent(root).is_none() {
        return Err(CdsError::MissingParent(root));
    }
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        order.extend(t.children(v).iter().copied().filter(|&c| in_scope(c)));
    }
    let mut state: std::collections::HashMap<usize, (bool, bool)> = std::collections::HashMap::with_capacity(order.len());
    let mut selected = Vec::new();
    // (joined, dominated) per processed vertex
    for &w in order.iter().rev() {
        let kids = t.children(w).iter().filter_map(|c| state.get(c).map(|&s| (*c, s)));
        let mut joins = false;
        let mut dominated = false;
        for (c, (c_joined, c_dominated)) in kids {
            joins |= clients[c] && !c_dominated;
            dominated |= c_joined;
        }
        if joins {
            selected.push(w);
        }
        let dominated = dominated || joins;
        state.insert(w, (joins, dominated));
        if w == root && clients[w] && !dominated {
            selected.push(if subtree_mode { t.parent(w).expect("checked above") } else { w });
        }
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Exact minimum client dominating set of the whole tree.
pub fn p_up(t: &RootedTree, inst: &CdsInstance, subtree_mode: bool) -> Result<DominatingSet, CdsError> {
    let sel = p_up_scoped(t, &inst.clients, t.root(), |_| true, subtree_mode)?;
    Ok(DominatingSet::from_vertices(t.n(), sel))
}

fn still_dominates_locally(t: &RootedTree, clients: &[bool], members: &[bool], around: usize) -> bool {
    let g = t.graph();
    let mut check = vec![around];
    check.extend_from_slice(g.neighbors(around));
    check.iter().all(|&x| !clients[x] || members[x] || g.neighbors(x).iter().any(|&y| members[y]))
}

/// Pushes members towards the root while domination is preserved.
///
/// Members whose parent is already a member are dropped when that keeps
/// domination, so the size never grows and stays equal for minimal inputs.
pub fn make_upmost(t: &RootedTree, inst: &CdsInstance, d: &DominatingSet) -> Result<DominatingSet, CdsError> {
    if !d.dominates(t.graph(), inst) {
        return Err(CdsError::InvalidInput("set does not dominate every client".into()));
    }
    let mut members = d.members.clone();
    loop {
        let mut changed = false;
        for &w in t.bfs_order().iter().rev() {
            let mut v = w;
            while members[v] {
                let Some(p) = t.parent(v) else { break };
                members[v] = false;
                let was = members[p];
                members[p] = true;
                if still_dominates_locally(t, &inst.clients, &members, v) {
                    changed = true;
                    if was {
                        break;
                    }
                    v = p;
                } else {
                    members[p] = was;
                    members[v] = true;
                    break;
                }
            }
        }
        if !changed {
            return Ok(DominatingSet { members });
        }
    }
}

/// Whether no member can be swapped for its parent without losing domination.
pub fn is_upmost(t: &RootedTree, inst: &CdsInstance, d: &DominatingSet) -> bool {
    let mut members = d.members.clone();
    for w in d.vertices() {
        let Some(p) = t.parent(w) else { continue };
        let was = members[p];
        members[w] = false;
        members[p] = true;
        let ok = still_dominates_locally(t, &inst.clients, &members, w);
        members[p] = was;
        members[w] = true;
        if ok {
            return false;
        }
    }
    true
}

/// Partition of a rooted tree into subtrees of depth `k`.
///
/// Vertices at depth divisible by `k` are subtree roots; every other vertex
/// belongs to the subtree of its nearest such ancestor. A tree whose height
/// is a multiple of `k` ends in single-vertex subtrees at the deepest layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecompositionK {
    pub k: usize,
    pub layer: Vec<usize>,
    pub subtree_root: Vec<usize>,
    /// Subtree roots in BFS order.
    pub roots: Vec<usize>,
}

impl TreeDecompositionK {
    /// Depth of `v` inside its own subtree.
    pub fn local_depth(&self, v: usize) -> usize {
        self.layer[v] - self.layer[self.subtree_root[v]]
    }

    /// A vertex on the last layer of its subtree that has children in the tree.
    pub fn is_layer_leaf(&self, t: &RootedTree, v: usize) -> bool {
        self.local_depth(v) == self.k - 1 && !t.children(v).is_empty()
    }

    pub fn is_subtree_root(&self, v: usize) -> bool {
        self.subtree_root[v] == v
    }

    /// Members of the subtree rooted at `r`, in BFS order.
    pub fn members(&self, t: &RootedTree, r: usize) -> Vec<usize> {
        let mut out = vec![r];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            out.extend(t.children(v).iter().copied().filter(|&c| self.subtree_root[c] == r));
        }
        out
    }
}

pub fn check_k(k: usize) -> Result<(), CdsError> {
    if k >= 5 && k % 4 == 1 {
        Ok(())
    } else {
        Err(CdsError::InvalidK(k))
    }
}

pub fn decompose(t: &RootedTree, k: usize) -> Result<TreeDecompositionK, CdsError> {
    check_k(k)?;
    let n = t.n();
    let layer = t.depths().to_vec();
    let mut subtree_root = vec![0; n];
    let mut roots = Vec::new();
    for &v in t.bfs_order() {
        if layer[v].is_multiple_of(k) {
            subtree_root[v] = v;
            roots.push(v);
        } else {
            subtree_root[v] = subtree_root[t.parent(v).expect("non-root layer has a parent")];
        }
    }
    Ok(TreeDecompositionK { k, layer, subtree_root, roots })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubtreeKind {
    /// No layer-leaves: nothing hangs below.
    LTree,
    /// Every path to a hanging root crosses an edge between two non-clients.
    /// The peak is the part reachable from the root without crossing one.
    CutITree { peak: Vec<usize> },
    FullITree,
}

/// Edge usable by a domination chain: at least one endpoint is a client.
fn traversable(clients: &[bool], x: usize, y: usize) -> bool {
    clients[x] || clients[y]
}

/// Kind of every subtree, indexed like `dec.roots`.
///
/// The peak of a cut I-tree is the largest top part whose downward boundary
/// edges join two non-clients: every vertex reachable from the root through
/// vertices with no traversable path down to a hanging root.
pub fn classify_subtrees(t: &RootedTree, dec: &TreeDecompositionK, inst: &CdsInstance) -> Vec<SubtreeKind> {
    dec.roots
        .iter()
        .map(|&r| {
            let members = dec.members(t, r);
            if !members.iter().any(|&v| dec.is_layer_leaf(t, v)) {
                return SubtreeKind::LTree;
            }
            // reach[x]: an all-traversable path leads from x to a hanging root
            let mut reach = std::collections::HashMap::with_capacity(members.len());
            for &x in members.iter().rev() {
                let hits = t.children(x).iter().any(|&c| {
                    traversable(&inst.clients, x, c) && (dec.subtree_root[c] != r || reach[&c])
                });
                reach.insert(x, hits);
            }
            if reach[&r] {
                return SubtreeKind::FullITree;
            }
            let mut peak = vec![r];
            let mut i = 0;
            while i < peak.len() {
                let v = peak[i];
                i += 1;
                peak.extend(t.children(v).iter().copied().filter(|&c| dec.subtree_root[c] == r && !reach[&c]));
            }
            peak.sort_unstable();
            SubtreeKind::CutITree { peak }
        })
        .collect()
}

/// Result of the centralized APPR run with its intermediate sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprOutcome {
    pub set: DominatingSet,
    /// Parents of subtree roots selected in the first phase.
    pub d_lleaves: Vec<usize>,
    /// Selections of the second phase.
    pub d_int: Vec<usize>,
    pub kinds: Vec<SubtreeKind>,
    /// Number of full I-trees, the top one included.
    pub t_f: usize,
}

/// Centralized mirror of the distributed APPR protocol.
pub fn appr(t: &RootedTree, dec: &TreeDecompositionK, inst: &CdsInstance) -> Result<ApprOutcome, CdsError> {
    let n = t.n();
    if inst.clients.len() != n {
        return Err(CdsError::InvalidInput("client mask length differs from n".into()));
    }
    let kinds = classify_subtrees(t, dec, inst);
    let mut lleaves = vec![false; n];
    let mut t_f = 0;
    for (i, &r) in dec.roots.iter().enumerate() {
        if kinds[i] == SubtreeKind::FullITree {
            t_f += 1;
        }
        let Some(parent) = t.parent(r) else { continue };
        let select = match &kinds[i] {
            SubtreeKind::FullITree => true,
            SubtreeKind::LTree => {
                let scope = |c: usize| dec.subtree_root[c] == r;
                p_up_scoped(t, &inst.clients, r, scope, true)?.contains(&parent)
            }
            SubtreeKind::CutITree { peak } => {
                let scope = |c: usize| peak.binary_search(&c).is_ok();
                p_up_scoped(t, &inst.clients, r, scope, true)?.contains(&parent)
            }
        };
        if select {
            lleaves[parent] = true;
        }
    }
    let g = t.graph();
    let residual: Vec<bool> = (0..n)
        .map(|v| inst.clients[v] && !lleaves[v] && !g.neighbors(v).iter().any(|&w| lleaves[w]))
        .collect();
    let mut members = lleaves.clone();
    let mut d_int = Vec::new();
    for &r in &dec.roots {
        let scope = |c: usize| dec.subtree_root[c] == r;
        for v in p_up_scoped(t, &residual, r, scope, false)? {
            members[v] = true;
            d_int.push(v);
        }
    }
    d_int.sort_unstable();
    Ok(ApprOutcome {
        set: DominatingSet { members },
        d_lleaves: (0..n).filter(|&v| lleaves[v]).collect(),
        d_int,
        kinds,
        t_f,
    })
}

/// Preprocessing bits per node of [`ApprProgram`] for a given `k`.
pub fn appr_payload_bits(k: usize) -> usize {
    bits_for(k)
}

/// Distributed APPR. Preprocessing stores only `layer mod k`; parent,
/// children and subtree boundaries follow from the neighbors' residues.
///
/// Schedule: round 0 shares client flags; a node at subtree depth `h` reports
/// to its parent at round `k - h` (first phase) and at round `2k + 1 - h`
/// (second phase); subtree roots pick their parent at round `k`, selected
/// layer-leaves announce themselves at round `k + 1`. All nodes halt by
/// round `2k + 1`.
#[derive(Debug, Clone)]
pub struct ApprProgram {
    pub k: usize,
    pub root: usize,
}

impl ApprProgram {
    pub fn new(k: usize, root: usize) -> Result<Self, CdsError> {
        check_k(k)?;
        Ok(ApprProgram { k, root })
    }

    pub fn round_bound(&self) -> usize {
        2 * self.k + 1
    }
}

#[derive(Debug, Clone)]
pub enum ApprMsg {
    Hello { client: bool, residue: usize },
    Up1 { undominated_client: bool, joined: bool, reach: bool },
    Select,
    InLleaves,
    Up2 { undominated_client: bool, joined: bool },
}

#[derive(Debug)]
pub struct ApprState {
    client: bool,
    depth: usize,
    parent_port: Option<usize>,
    child_ports: Vec<usize>,
    neighbor_client: Vec<bool>,
    in_lleaves: bool,
    lleaves_dominated: bool,
    up1: Vec<(bool, bool, bool)>,
    up2: Vec<(bool, bool)>,
}

impl NodeProgram for ApprProgram {
    type State = ApprState;
    type Msg = ApprMsg;
    type Output = bool;

    fn preprocess(&self, g: &Graph) -> Result<Vec<Payload>, SimError> {
        let t = crate::graph::root_at(g, self.root)
            .map_err(|e| SimError::Preprocess { vertex: None, msg: e.to_string() })?;
        let width = appr_payload_bits(self.k);
        Ok((0..g.n()).map(|v| Payload::new().with((t.depth(v) % self.k) as u64, width)).collect())
    }

    fn init(&self, ctx: &NodeContext, payload: &Payload, input: &LocalInput, out: &mut Outbox<ApprMsg>) -> (ApprState, Option<bool>) {
        let k = self.k;
        let residue = payload.read(0, appr_payload_bits(k)) as usize;
        out.broadcast(ApprMsg::Hello { client: input.is_client(), residue });
        let state = ApprState {
            client: input.is_client(),
            depth: residue,
            parent_port: None,
            child_ports: Vec::new(),
            neighbor_client: vec![false; ctx.degree()],
            in_lleaves: false,
            lleaves_dominated: false,
            up1: Vec::new(),
            up2: Vec::new(),
        };
        (state, None)
    }

    fn on_round(
        &self,
        _ctx: &NodeContext,
        s: &mut ApprState,
        round: usize,
        inbox: &[(usize, ApprMsg)],
        out: &mut Outbox<ApprMsg>,
    ) -> Option<bool> {
        let k = self.k;
        for (port, msg) in inbox {
            match *msg {
                ApprMsg::Hello { client, residue } => {
                    s.neighbor_client[*port] = client;
                    if residue == (s.depth + k - 1) % k {
                        s.parent_port = Some(*port);
                    } else {
                        s.child_ports.push(*port);
                    }
                }
                ApprMsg::Up1 { undominated_client, joined, reach } => {
                    s.up1.push((undominated_client, joined, reach && (s.client || s.neighbor_client[*port])))
                }
                ApprMsg::Select => s.in_lleaves = true,
                ApprMsg::InLleaves => s.lleaves_dominated = true,
                ApprMsg::Up2 { undominated_client, joined } => s.up2.push((undominated_client, joined)),
            }
        }
        let h = s.depth;
        // first phase: report at round k - h
        if round == k - h {
            let hanging = h == k - 1;
            let reach_below = if hanging {
                s.child_ports.iter().any(|&p| s.client || s.neighbor_client[p])
            } else {
                s.up1.iter().any(|&(_, _, r)| r)
            };
            let joined = s.up1.iter().any(|&(u, _, _)| u);
            let dominated = joined || s.up1.iter().any(|&(_, j, _)| j);
            let undominated_client = s.client && !dominated;
            match s.parent_port {
                Some(p) if h > 0 => out.send(p, ApprMsg::Up1 { undominated_client, joined, reach: reach_below }),
                Some(p) if reach_below || undominated_client => out.send(p, ApprMsg::Select),
                _ => {}
            }
        }
        if round == k + 1 && s.in_lleaves {
            out.broadcast(ApprMsg::InLleaves);
        }
        // second phase: report at round 2k + 1 - h
        if round == 2 * k + 1 - h {
            let residual = s.client && !s.in_lleaves && !s.lleaves_dominated;
            let joined = s.up2.iter().any(|&(u, _)| u);
            let dominated = joined || s.up2.iter().any(|&(_, j)| j);
            let undominated_client = residual && !dominated;
            let member = s.in_lleaves || joined || (h == 0 && undominated_client);
            if h > 0 {
                let p = s.parent_port.expect("non-root has a parent");
                out.send(p, ApprMsg::Up2 { undominated_client, joined });
            }
            return Some(member);
        }
        None
    }
}

/// Runs [`ApprProgram`] on a single instance and reads back the set.
pub fn appr_distributed(
    t: &RootedTree,
    k: usize,
    inst: &CdsInstance,
) -> Result<(DominatingSet, RunReport<bool>), CdsError> {
    let prog = ApprProgram::new(k, t.root())?;
    let g = t.graph();
    let pre = run_preprocess(g, &prog)?;
    let report = run_instance(g, &pre, &prog, &inst.to_instance(), prog.round_bound() + 1)?;
    let set = DominatingSet { members: report.unwrap_outputs() };
    Ok((set, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLbKind {
    /// Path on `4k+2` vertices with clients on `v2, v4, ..., v_4k`.
    C1,
    /// Same path with clients on `v4, v6, ..., v_{4k+2}`.
    C2,
    /// Path on `4k+7` vertices with clients on every odd-indexed vertex.
    OddClients,
    /// [`PathLbKind::OddClients`] without its two endpoints.
    OddClientsTrimmed,
}

/// Lower-bound path fixtures. Vertex `v_i` of the construction is id `i - 1`.
pub fn gen_path_lb_instances(kind: PathLbKind, k: usize) -> Result<(Graph, CdsInstance), CdsError> {
    let (n, clients): (usize, Vec<usize>) = match kind {
        PathLbKind::C1 | PathLbKind::C2 => {
            if k < 2 || !k.is_multiple_of(2) {
                return Err(CdsError::InvalidInput(format!("k = {k} must be even and positive")));
            }
            let n = 4 * k + 2;
            let first = if kind == PathLbKind::C1 { 2 } else { 4 };
            let last = if kind == PathLbKind::C1 { 4 * k } else { 4 * k + 2 };
            (n, (first..=last).step_by(2).map(|i| i - 1).collect())
        }
        PathLbKind::OddClients | PathLbKind::OddClientsTrimmed => {
            check_k(k)?;
            let n = 4 * k + 7;
            let mut c: Vec<usize> = (1..=n).step_by(2).map(|i| i - 1).collect();
            if kind == PathLbKind::OddClientsTrimmed {
                c.retain(|&v| v != 0 && v != n - 1);
            }
            (n, c)
        }
    };
    let g = crate::graph::generate_path(n).map_err(|e| CdsError::InvalidInput(e.to_string()))?;
    Ok((g, CdsInstance::from_vertices(n, &clients)))
}
