//! Scalar graph measures assembled into one table row per graph.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::census::intersect_sorted;
use crate::community::{best_modularity, Partition};
use crate::error::{Error, Result};
use crate::geometry::{distance_distribution, DistanceMatrix};
use crate::graph::{LabeledGraph, VertexId};
use crate::transform::LargestComponent;

/// Fraction of edges that are defect bonds.
pub fn defect_concentration(graph: &LabeledGraph) -> Result<f64> {
    match graph.edge_count() {
        0 => Err(Error::NoEdges("defect concentration")),
        m => Ok(graph.defect_edge_count() as f64 / m as f64),
    }
}

/// Mean hop distance over unordered pairs.
pub fn average_path_length(dm: &DistanceMatrix) -> f64 {
    distance_distribution(dm).mean()
}

/// Mean local clustering; vertices of degree below 2 contribute 0.
pub fn clustering_coefficient(graph: &LabeledGraph) -> f64 {
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = (0..n as VertexId).map(|v| local_clustering(graph, v)).sum();
    total / n as f64
}

/// Mean local clustering over vertices of degree 2 or more only; 0 when
/// there are none.
pub fn clustering_coefficient_nonleaf(graph: &LabeledGraph) -> f64 {
    let (sum, count) = (0..graph.node_count() as VertexId)
        .filter(|&v| graph.degree(v) >= 2)
        .fold((0.0, 0usize), |(s, c), v| (s + local_clustering(graph, v), c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

fn local_clustering(graph: &LabeledGraph, v: VertexId) -> f64 {
    let nbrs = graph.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let twice_links: usize = nbrs
        .iter()
        .map(|&u| intersect_sorted(nbrs, graph.neighbors(u)).len())
        .sum();
    twice_links as f64 / (k * (k - 1)) as f64
}

/// Best Louvain modularity over `restarts` seeded runs.
pub fn modularity(graph: &LabeledGraph, restarts: usize, seed: u64) -> Result<Partition> {
    best_modularity(graph, restarts, seed)
}

/// Which transform of a run a row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Pure twin grown with `p = 0`.
    Base,
    /// Grown with the configured defect probability.
    Defect,
    /// Defect run with its defect bonds removed.
    DefectRemoved,
    /// Defect run with as many uniformly random bonds removed.
    RandC,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Base,
        Variant::Defect,
        Variant::DefectRemoved,
        Variant::RandC,
    ];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Base => "base",
            Variant::Defect => "defect",
            Variant::DefectRemoved => "defect-removed",
            Variant::RandC => "rand-c",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (expected base, defect, defect-removed or rand-c)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub variant: Variant,
    pub affinity: f64,
    pub defect_probability: f64,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub largest_component: usize,
    /// Defect concentration `c`.
    pub concentration: f64,
    /// `2E / N` over the whole graph.
    pub mean_degree: f64,
    /// Over the largest component.
    pub path_length: f64,
    /// Over the largest component.
    pub clustering: f64,
    /// Over all vertices; differs from `clustering` only when there are
    /// several components.
    pub clustering_all: f64,
    /// Largest component, averaged over vertices of degree 2 or more.
    pub clustering_nonleaf: f64,
    pub modularity: f64,
    /// Diameter of the largest component.
    pub diameter: u32,
}

impl MetricsRow {
    pub const CSV_HEADER: &'static str = "nu,p,variant,seed,c,k,l,cc,mod,D,N,E,components,largest,cc_all,cc_nonleaf";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{},{},{},{:.6},{:.6}",
            self.affinity,
            self.defect_probability,
            self.variant,
            self.seed,
            self.concentration,
            self.mean_degree,
            self.path_length,
            self.clustering,
            self.modularity,
            self.diameter,
            self.nodes,
            self.edges,
            self.components,
            self.largest_component,
            self.clustering_all,
            self.clustering_nonleaf,
        )
    }
}

/// Where a row came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowMeta {
    pub variant: Variant,
    pub affinity: f64,
    pub defect_probability: f64,
    pub seed: u64,
    pub modularity_restarts: usize,
}

/// `dm` must be the distance matrix of `component.graph`.
pub fn metrics_row(
    graph: &LabeledGraph,
    component: &LargestComponent,
    dm: &DistanceMatrix,
    meta: RowMeta,
) -> Result<MetricsRow> {
    let nodes = graph.node_count();
    let edges = graph.edge_count();
    Ok(MetricsRow {
        variant: meta.variant,
        affinity: meta.affinity,
        defect_probability: meta.defect_probability,
        seed: meta.seed,
        nodes,
        edges,
        components: component.sizes.len(),
        largest_component: component.vertices.len(),
        concentration: defect_concentration(graph)?,
        mean_degree: if nodes == 0 { 0.0 } else { 2.0 * edges as f64 / nodes as f64 },
        path_length: average_path_length(dm),
        clustering: clustering_coefficient(&component.graph),
        clustering_all: clustering_coefficient(graph),
        clustering_nonleaf: clustering_coefficient_nonleaf(&component.graph),
        modularity: modularity(graph, meta.modularity_restarts, meta.seed)?.modularity,
        diameter: dm.diameter(),
    })
}
