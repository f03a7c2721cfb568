//! Online inputs and their JSON-lines encoding.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// One recurrent input over the fixed support graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecurrentInstance {
    /// Client flag per vertex.
    ClientSet(Vec<bool>),
    /// Fixed colors; absent vertices are uncolored.
    Precoloring(BTreeMap<usize, u32>),
    /// Active flag per edge id.
    EdgeSubset(Vec<bool>),
    /// Input label per vertex.
    InputLabels(BTreeMap<usize, u32>),
}

/// What a single node sees of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalInput {
    Client(bool),
    /// 0 means uncolored.
    Color(u32),
    /// Active flag per port.
    ActivePorts(Vec<bool>),
    Label(Option<u32>),
}

impl LocalInput {
    pub fn is_client(&self) -> bool {
        matches!(self, LocalInput::Client(true))
    }

    pub fn color(&self) -> u32 {
        match self {
            LocalInput::Color(c) => *c,
            _ => 0,
        }
    }

    pub fn active_ports(&self) -> Option<&[bool]> {
        match self {
            LocalInput::ActivePorts(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{kind} mask has length {got}, expected {expected}")]
    WrongLength { kind: &'static str, got: usize, expected: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("color 0 is reserved for uncolored vertices (vertex {0})")]
    ZeroColor(usize),
    #[error("precoloring is improper on edge ({0}, {1})")]
    ImproperPrecoloring(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl RecurrentInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            RecurrentInstance::ClientSet(_) => "client-set",
            RecurrentInstance::Precoloring(_) => "precoloring",
            RecurrentInstance::EdgeSubset(_) => "edge-subset",
            RecurrentInstance::InputLabels(_) => "input-labels",
        }
    }

    /// Full edge set of `g`.
    pub fn all_edges(g: &Graph) -> Self {
        RecurrentInstance::EdgeSubset(vec![true; g.m()])
    }

    pub fn clients_from(n: usize, clients: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &c in clients {
            mask[c] = true;
        }
        RecurrentInstance::ClientSet(mask)
    }

    /// Checks the instance against the graph it is meant for.
    pub fn validate(&self, g: &Graph) -> Result<(), InstanceError> {
        match self {
            RecurrentInstance::ClientSet(mask) if mask.len() != g.n() => {
                Err(InstanceError::WrongLength { kind: "client-set", got: mask.len(), expected: g.n() })
            }
            RecurrentInstance::EdgeSubset(mask) if mask.len() != g.m() => {
                Err(InstanceError::WrongLength { kind: "edge-subset", got: mask.len(), expected: g.m() })
            }
            RecurrentInstance::Precoloring(pc) => {
                for (&v, &c) in pc {
                    if v >= g.n() {
                        return Err(InstanceError::VertexOutOfRange(v));
                    }
                    if c == 0 {
                        return Err(InstanceError::ZeroColor(v));
                    }
                }
                for &(u, v) in g.edges() {
                    if let (Some(a), Some(b)) = (pc.get(&u), pc.get(&v)) {
                        if a == b {
                            return Err(InstanceError::ImproperPrecoloring(u, v));
                        }
                    }
                }
                Ok(())
            }
            RecurrentInstance::InputLabels(labels) => match labels.keys().find(|&&v| v >= g.n()) {
                Some(&v) => Err(InstanceError::VertexOutOfRange(v)),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// The part of the instance visible to vertex `v`.
    pub fn local_input(&self, g: &Graph, v: usize) -> LocalInput {
        match self {
            RecurrentInstance::ClientSet(mask) => LocalInput::Client(mask[v]),
            RecurrentInstance::Precoloring(pc) => LocalInput::Color(pc.get(&v).copied().unwrap_or(0)),
            RecurrentInstance::EdgeSubset(mask) => {
                LocalInput::ActivePorts(g.incident_edges(v).iter().map(|&e| mask[e]).collect())
            }
            RecurrentInstance::InputLabels(labels) => LocalInput::Label(labels.get(&v).copied()),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&RawInstance::from(self)).expect("instance serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
enum RawInstance {
    ClientSet(Vec<u8>),
    Precoloring(BTreeMap<usize, u32>),
    EdgeSubset(RawEdges),
    InputLabels(BTreeMap<usize, u32>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEdges {
    Mask(Vec<u8>),
    List { edges: Vec<(usize, usize)> },
}

fn to_bits(mask: &[bool]) -> Vec<u8> {
    mask.iter().map(|&b| b as u8).collect()
}

fn from_bits(bits: &[u8]) -> Result<Vec<bool>, String> {
    bits.iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(format!("bitmask entries must be 0 or 1, got {other}")),
        })
        .collect()
}

impl From<&RecurrentInstance> for RawInstance {
    fn from(inst: &RecurrentInstance) -> Self {
        match inst {
            RecurrentInstance::ClientSet(m) => RawInstance::ClientSet(to_bits(m)),
            RecurrentInstance::Precoloring(pc) => RawInstance::Precoloring(pc.clone()),
            RecurrentInstance::EdgeSubset(m) => RawInstance::EdgeSubset(RawEdges::Mask(to_bits(m))),
            RecurrentInstance::InputLabels(l) => RawInstance::InputLabels(l.clone()),
        }
    }
}

/// Parses one JSON line against graph `g`.
pub fn parse_instance(line: &str, g: &Graph) -> Result<RecurrentInstance, InstanceError> {
    let parse_err = |msg: String| InstanceError::Parse { line: 1, msg };
    let raw: RawInstance = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
    let inst = match raw {
        RawInstance::ClientSet(bits) => RecurrentInstance::ClientSet(from_bits(&bits).map_err(parse_err)?),
        RawInstance::Precoloring(pc) => RecurrentInstance::Precoloring(pc),
        RawInstance::EdgeSubset(RawEdges::Mask(bits)) => {
            RecurrentInstance::EdgeSubset(from_bits(&bits).map_err(parse_err)?)
        }
        RawInstance::EdgeSubset(RawEdges::List { edges }) => {
            let mut mask = vec![false; g.m()];
            for (u, v) in edges {
                let e = g.edge_id(u, v).ok_or(InstanceError::NotAnEdge(u, v))?;
                mask[e] = true;
            }
            RecurrentInstance::EdgeSubset(mask)
        }
        RawInstance::InputLabels(l) => RecurrentInstance::InputLabels(l),
    };
    inst.validate(g)?;
    Ok(inst)
}

/// Parses a JSON-lines stream; blank lines are skipped.
pub fn parse_instances(text: &str, g: &Graph) -> Result<Vec<RecurrentInstance>, InstanceError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let inst = parse_instance(line, g).map_err(|e| match e {
            InstanceError::Parse { msg, .. } => InstanceError::Parse { line: i + 1, msg },
            other => InstanceError::Parse { line: i + 1, msg: other.to_string() },
        })?;
        out.push(inst);
    }
    Ok(out)
}

pub fn write_instances(instances: &[RecurrentInstance]) -> String {
    instances.iter().map(|i| i.to_json_line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_path;

    #[test]
    fn json_lines_round_trip() {
        let g = generate_path(4).unwrap();
        let insts = vec![
            RecurrentInstance::clients_from(4, &[1, 3]),
            RecurrentInstance::Precoloring(BTreeMap::from([(0, 2), (2, 7)])),
            RecurrentInstance::EdgeSubset(vec![true, false, true]),
            RecurrentInstance::InputLabels(BTreeMap::from([(3, 1)])),
        ];
        let text = write_instances(&insts);
        assert_eq!(parse_instances(&text, &g).unwrap(), insts);
    }

    #[test]
    fn edge_list_payload() {
        let g = generate_path(4).unwrap();
        let inst = parse_instance(r#"{"kind":"edge-subset","payload":{"edges":[[2,1]]}}"#, &g).unwrap();
        assert_eq!(inst, RecurrentInstance::EdgeSubset(vec![false, true, false]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let g = generate_path(3).unwrap();
        let text = "{\"kind\":\"client-set\",\"payload\":[1,0,1]}\n{\"kind\":\"client-set\",\"payload\":[1]}\n";
        assert!(matches!(parse_instances(text, &g), Err(InstanceError::Parse { line: 2, .. })));
        let bad = r#"{"kind":"precoloring","payload":{"0":1,"1":1}}"#;
        assert!(matches!(parse_instance(bad, &g), Err(InstanceError::ImproperPrecoloring(0, 1))));
    }
}
