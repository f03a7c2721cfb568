//! Graph files: JSON `{"n": .., "edges": [[u, v], ..]}` or an edge list whose
//! first line is `n` followed by one `u v` pair per line.

use super::{Graph, GraphError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphFile { n: self.n(), edges: self.edges().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        Graph::new(file.n, &file.edges).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(g).expect("graph serialization cannot fail")
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses either format, picking JSON when the text starts with `{`.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| GraphError::Parse { line: e.line(), msg: e.to_string() })
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| GraphError::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|e| err(format!("bad integer {s:?}: {e}")));
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(num(count)?),
            (None, _) => return Err(err("first line must hold the vertex count".into())),
            (Some(_), [u, v]) => edges.push((num(u)?, num(v)?)),
            (Some(_), _) => return Err(err(format!("expected `u v`, got {line:?}"))),
        }
    }
    let n = n.ok_or(GraphError::Parse { line: 0, msg: "empty graph file".into() })?;
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_random_planar;

    #[test]
    fn round_trips() {
        let g = generate_random_planar(25, 3);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
        assert_eq!(parse_graph(&to_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_edge_list("3\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err}");
    }
}
