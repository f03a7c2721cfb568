//! Locally checkable labellings on paths.
//!
//! A radius-1 [`LclSpec`] lists the labels a lone vertex may take, the
//! ordered pairs `(end, neighbor)` allowed at an end of a path, and the
//! triples `(left, center, right)` allowed in the interior. Paths are read
//! left to right, so a triple constrains the orientation it is written in;
//! symmetric problems list both orientations.

mod digraph;
mod normalize;
mod solver;
mod specs;
mod speedup;
#[cfg(test)]
mod tests;

pub use digraph::{classify, classify_with_cap, Classification, Complexity, LabelDigraph, WalkTables, Walkspans, Witness};
pub use normalize::{normalize_radius, Ball, Normalized, WindowSpec};
pub use solver::{PathSolver, Wave};
pub use specs::{bundled, bundled_spec, coprime_cycles, ruling_radius2};
pub use speedup::{Speedup, SpeedupMsg, WindowRecord};

use crate::graph::Graph;
use crate::sim::{RecurrentInstance, SimError, Verdict};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

pub type Label = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LclError {
    #[error("cannot parse LCL description: {0}")]
    Parse(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} listed twice")]
    DuplicateLabel(String),
    #[error("output alphabet is empty")]
    EmptyAlphabet,
    #[error("{0} labels exceed the supported maximum")]
    TooManyLabels(usize),
    #[error("only problems with at most one input label can be classified, got {0}")]
    InputLabels(usize),
    #[error("problem {0:?} needs linear rounds; no constant-round solver exists")]
    NotConstant(String),
    #[error("n0 = {n0} violates 4 T(n0) < n0 with T(n0) = {t}")]
    InvalidN0 { n0: usize, t: usize },
    #[error("graph is not a path")]
    NotAPath,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A radius-1 LCL on paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LclSpec {
    pub name: String,
    /// Input alphabet; empty or a single label for subgraph problems.
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub singletons: BTreeSet<Label>,
    /// `(end, neighbor)`.
    pub pairs: BTreeSet<(Label, Label)>,
    /// `(left, center, right)`.
    pub triples: BTreeSet<(Label, Label, Label)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sigma_in: Vec<String>,
    sigma_out: Vec<String>,
    #[serde(default)]
    singletons: Vec<String>,
    #[serde(default)]
    pairs: Vec<[String; 2]>,
    #[serde(default)]
    triples: Vec<[String; 3]>,
}

impl LclSpec {
    /// Spec over `sigma_out` whose rules are given by predicates on labels.
    pub fn from_fn(
        name: &str,
        sigma_out: &[&str],
        single: impl Fn(Label) -> bool,
        pair: impl Fn(Label, Label) -> bool,
        triple: impl Fn(Label, Label, Label) -> bool,
    ) -> Result<Self, LclError> {
        let mut spec = LclSpec::empty(name, sigma_out.iter().map(|s| s.to_string()).collect())?;
        let s = spec.sigma() as Label;
        for a in 0..s {
            if single(a) {
                spec.singletons.insert(a);
            }
            for b in 0..s {
                if pair(a, b) {
                    spec.pairs.insert((a, b));
                }
                for c in 0..s {
                    if triple(a, b, c) {
                        spec.triples.insert((a, b, c));
                    }
                }
            }
        }
        Ok(spec)
    }

    /// Spec with the given alphabet and no rules.
    pub fn empty(name: &str, sigma_out: Vec<String>) -> Result<Self, LclError> {
        if sigma_out.is_empty() {
            return Err(LclError::EmptyAlphabet);
        }
        if sigma_out.len() > Label::MAX as usize {
            return Err(LclError::TooManyLabels(sigma_out.len()));
        }
        let mut seen = BTreeSet::new();
        for s in &sigma_out {
            if !seen.insert(s) {
                return Err(LclError::DuplicateLabel(s.clone()));
            }
        }
        Ok(LclSpec {
            name: name.to_string(),
            sigma_in: Vec::new(),
            sigma_out,
            singletons: BTreeSet::new(),
            pairs: BTreeSet::new(),
            triples: BTreeSet::new(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LclError> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| LclError::Parse(e.to_string()))?;
        let mut spec = LclSpec::empty(raw.name.as_deref().unwrap_or("lcl"), raw.sigma_out)?;
        spec.sigma_in = raw.sigma_in;
        let index: HashMap<&str, Label> =
            spec.sigma_out.iter().enumerate().map(|(i, s)| (s.as_str(), i as Label)).collect();
        let get = |s: &str| index.get(s).copied().ok_or_else(|| LclError::UnknownLabel(s.to_string()));
        let mut singletons = BTreeSet::new();
        for a in &raw.singletons {
            singletons.insert(get(a)?);
        }
        let mut pairs = BTreeSet::new();
        for [a, b] in &raw.pairs {
            pairs.insert((get(a)?, get(b)?));
        }
        let mut triples = BTreeSet::new();
        for [a, b, c] in &raw.triples {
            triples.insert((get(a)?, get(b)?, get(c)?));
        }
        spec.singletons = singletons;
        spec.pairs = pairs;
        spec.triples = triples;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let name = |l: Label| self.sigma_out[l as usize].clone();
        let raw = RawSpec {
            name: Some(self.name.clone()),
            sigma_in: self.sigma_in.clone(),
            sigma_out: self.sigma_out.clone(),
            singletons: self.singletons.iter().map(|&a| name(a)).collect(),
            pairs: self.pairs.iter().map(|&(a, b)| [name(a), name(b)]).collect(),
            triples: self.triples.iter().map(|&(a, b, c)| [name(a), name(b), name(c)]).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("spec serialization cannot fail")
    }

    pub fn sigma(&self) -> usize {
        self.sigma_out.len()
    }

    pub fn label(&self, name: &str) -> Result<Label, LclError> {
        self.sigma_out
            .iter()
            .position(|s| s == name)
            .map(|i| i as Label)
            .ok_or_else(|| LclError::UnknownLabel(name.to_string()))
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.sigma_out[l as usize]
    }

    /// Rule check: end pairs, interior triples, or a singleton.
    pub fn is_valid(&self, labels: &[Label]) -> bool {
        match labels.len() {
            0 => true,
            1 => self.singletons.contains(&labels[0]),
            n => {
                self.pairs.contains(&(labels[0], labels[1]))
                    && self.pairs.contains(&(labels[n - 1], labels[n - 2]))
                    && labels.windows(3).all(|w| self.triples.contains(&(w[0], w[1], w[2])))
            }
        }
    }

    pub fn digraph(&self) -> LabelDigraph {
        LabelDigraph::new(self)
    }
}

/// Vertices of a path graph from its left end (the end with the smaller id).
pub fn path_order(g: &Graph) -> Result<Vec<usize>, LclError> {
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    if g.m() != n - 1 || g.max_degree() > 2 || !g.is_connected() {
        return Err(LclError::NotAPath);
    }
    let start = (0..n).find(|&v| g.degree(v) <= 1).ok_or(LclError::NotAPath)?;
    let mut order = Vec::with_capacity(n);
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        match g.neighbors(cur).iter().find(|&&w| w != prev) {
            Some(&w) => {
                prev = cur;
                cur = w;
            }
            None => break,
        }
        if order.len() > n {
            return Err(LclError::NotAPath);
        }
    }
    Ok(order)
}

/// Maximal runs of `order` joined by edges kept by the instance.
pub fn subpaths(g: &Graph, order: &[usize], inst: &RecurrentInstance) -> Vec<Vec<usize>> {
    let keep = |u: usize, v: usize| match inst {
        RecurrentInstance::EdgeSubset(mask) => g.edge_id(u, v).is_some_and(|e| mask[e]),
        _ => true,
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 && keep(order[i - 1], v) {
            out.last_mut().expect("run started").push(v);
        } else {
            out.push(vec![v]);
        }
    }
    out
}

/// Checks solver outputs on every subpath of the instance. A subpath whose
/// length admits no valid labelling must be reported as `Some(None)` by all
/// of its vertices; any other subpath must carry a valid labelling.
pub fn validate_outputs(spec: &LclSpec, g: &Graph, inst: &RecurrentInstance, outputs: &[Option<Option<Label>>]) -> Verdict {
    let Ok(order) = path_order(g) else {
        return Verdict::valid(false);
    };
    let dg = spec.digraph();
    let ok = subpaths(g, &order, inst).iter().all(|run| {
        let labels: Option<Vec<Option<Label>>> = run.iter().map(|&v| outputs[v]).collect();
        let Some(labels) = labels else {
            return false;
        };
        if labels.iter().all(Option::is_none) {
            return !dg.feasible(run.len());
        }
        let labels: Option<Vec<Label>> = labels.into_iter().collect();
        labels.is_some_and(|l| spec.is_valid(&l))
    });
    Verdict::valid(ok)
}
