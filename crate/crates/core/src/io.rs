//! Edge-list text format and the JSON run sidecar.
//!
//! Edge list, one edge per line in canonical order:
//!
//! ```text
//! # nodes 7
//! # seed 42
//! # config nu=5 p=0.7 ...
//! 0 1 1
//! 0 2 0
//! ```
//!
//! The third column is the bond code, 0 for pure and 1 for defect. Header
//! lines are `# key value`; `nodes` is mandatory on output and optional on
//! input (it then defaults to one past the largest vertex id).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BondType, LabeledGraph, VertexId};
use crate::growth::{AssemblyState, EventRecord, GrowthConfig};
use crate::simplex::PlacedSimplex;

/// Ordered `# key value` header lines other than `nodes`.
pub type Header = Vec<(String, String)>;

pub fn write_edge_list(graph: &LabeledGraph, header: &[(String, String)]) -> String {
    let mut out = String::with_capacity(16 * graph.edge_count() + 64);
    out.push_str(&format!("# nodes {}\n", graph.node_count()));
    for (key, value) in header {
        out.push_str(&format!("# {key} {value}\n"));
    }
    for (e, bond) in graph.edges() {
        let (u, v) = e.endpoints();
        out.push_str(&format!("{u} {v} {}\n", bond.code()));
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<(LabeledGraph, Header)> {
    let mut header = Header::new();
    let mut nodes: Option<usize> = None;
    let mut edges: Vec<(VertexId, VertexId, BondType)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if key == "nodes" {
                nodes = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad node count `{value}`")))?,
                );
            } else if !key.is_empty() {
                header.push((key.to_string(), value.trim().to_string()));
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `u v t`, got `{line}`")));
        }
        let id = |s: &str| {
            s.parse::<VertexId>()
                .map_err(|_| err(format!("bad vertex id `{s}`")))
        };
        let bond = fields[2]
            .parse::<u8>()
            .ok()
            .and_then(BondType::from_code)
            .ok_or_else(|| err(format!("bad bond type `{}` (expected 0 or 1)", fields[2])))?;
        edges.push((id(fields[0])?, id(fields[1])?, bond));
    }
    let implied = edges
        .iter()
        .map(|&(u, v, _)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0);
    let n = nodes.unwrap_or(implied);
    let graph = LabeledGraph::from_edges(n, edges)?;
    Ok((graph, header))
}

/// Header lines describing a growth configuration.
pub fn config_header(config: &GrowthConfig) -> Header {
    vec![
        ("seed".into(), config.seed.to_string()),
        (
            "config".into(),
            format!(
                "target_nodes={} nu={} p={} alpha={} n_min={} n_max={} mode={}",
                config.target_nodes,
                config.affinity,
                config.defect_probability,
                config.size_exponent,
                config.min_size,
                config.max_size,
                config.mode
            ),
        ),
    ]
}

/// Everything about a growth run that the edge list does not carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSidecar {
    pub config: GrowthConfig,
    pub nodes: usize,
    pub edges: usize,
    pub defect_edges: usize,
    pub placed: Vec<PlacedSimplex>,
    pub events: Vec<EventRecord>,
}

impl RunSidecar {
    pub fn from_state(state: &AssemblyState) -> Self {
        let g = state.graph();
        RunSidecar {
            config: state.config().clone(),
            nodes: g.node_count(),
            edges: g.edge_count(),
            defect_edges: g.defect_edge_count(),
            placed: state.placed().to_vec(),
            events: state.events().to_vec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "# nodes 3\n0 1 0\n1 2 7\n";
        match read_edge_list(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read_edge_list("0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_edge_list("0 0 0\n"),
            Err(Error::SelfLoop(0))
        ));
    }

    #[test]
    fn isolated_vertices_survive_via_header() {
        let g = LabeledGraph::from_edges(5, [(0, 1, BondType::Defect)]).unwrap();
        let text = write_edge_list(&g, &[("variant".into(), "defect-removed".into())]);
        assert_eq!(text, "# nodes 5\n# variant defect-removed\n0 1 1\n");
        let (back, header) = read_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(header, vec![("variant".to_string(), "defect-removed".to_string())]);
    }

    #[test]
    fn node_count_inferred_without_header() {
        let (g, _) = read_edge_list("0 3 0\n1 2 1\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.defect_edge_count(), 1);
    }
}
